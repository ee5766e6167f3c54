#include "protocol.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace polyion::protocol {

MoleculeRegister MoleculeRegister::from_prior(std::vector<double> prior, std::uint64_t seed)
{
    MoleculeRegister reg;
    reg.prior = std::move(prior);
    reg.rng.seed(seed);
    std::discrete_distribution<int> d(reg.prior.begin(), reg.prior.end());
    reg.truth = d(reg.rng);
    return reg;
}

void SubspaceQuery::validate() const
{
    if (members.empty()) throw std::invalid_argument("query subspace is empty");
    if (members.size() == 1) return;
    // mixing graph over members must be connected
    std::map<int, int> comp;
    for (int id : members) comp[id] = id;
    std::function<int(int)> find = [&](int x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
    };
    for (const auto& [a, b] : drive_plan) {
        if (!comp.count(a) || !comp.count(b))
            throw std::invalid_argument("drive plan references a state outside the subspace");
        comp[find(a)] = find(b);
    }
    const int root = find(members.front());
    for (int id : members)
        if (find(id) != root)
            throw std::invalid_argument("drive plan does not connect the subspace");
}

bool SubspaceQuery::contains(int id) const
{
    return std::find(members.begin(), members.end(), id) != members.end();
}

SubspaceQuery SubspaceQuery::over(std::vector<int> m)
{
    SubspaceQuery q;
    q.members = std::move(m);
    for (std::size_t i = 0; i + 1 < q.members.size(); ++i)
        q.drive_plan.emplace_back(q.members[i], q.members[i + 1]);
    q.validate();
    return q;
}

void Thermometer::validate() const
{
    for (double p : {false_positive, false_negative})
        if (!(p >= 0.0 && p < 1.0))
            throw std::invalid_argument("classifier error rates must be in [0, 1)");
}

namespace {

Outcome apply_classifier(bool truly_heated, const Thermometer& th, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (truly_heated) return (u(rng) < th.false_negative) ? Outcome::not_heated : Outcome::heated;
    return (u(rng) < th.false_positive) ? Outcome::heated : Outcome::not_heated;
}

void project(MoleculeRegister& reg, const SubspaceQuery& q, bool in_subspace)
{
    if (!in_subspace) return;  // truth outside q is never altered
    std::uniform_int_distribution<int> pick(0, (int)q.members.size() - 1);
    reg.truth = q.members[pick(reg.rng)];
}

}  // namespace

MeasurementRecord measure_subspace(MoleculeRegister& reg, const SubspaceQuery& q,
                                   const Thermometer& th)
{
    q.validate();
    th.validate();
    const bool in = q.contains(reg.truth);
    MeasurementRecord rec;
    rec.query_ids = q.members;
    rec.outcome = apply_classifier(in, th, reg.rng);
    project(reg, q, in);
    rec.post_state = reg.truth;
    rec.elapsed = measurement_model_time;
    return rec;
}

MeasurementRecord measure_subspace_full(MoleculeRegister& reg, const SubspaceQuery& q,
                                        const Thermometer& th, const FullModelContext& ctx)
{
    q.validate();
    th.validate();
    const bool in = q.contains(reg.truth);

    const trapdyn::NormalModes nm = trapdyn::normal_modes(ctx.trap);
    trapdyn::IntegrateOptions opt = ctx.integrate;
    if (!in) opt.flips.reset();  // constant potential outside the subspace
    const auto ic = trapdyn::sample_thermal_state(ctx.trap, nm, ctx.T_init,
                                                  trapdyn::mix_seed(ctx.seed, 0));
    if (opt.flips) opt.flips->seed = trapdyn::mix_seed(ctx.seed, 1);
    const auto traj = trapdyn::integrate(ctx.trap, nm, ic, opt);
    const double T = trapdyn::temperature_of(traj, nm, ctx.readout_window);

    MeasurementRecord rec;
    rec.query_ids = q.members;
    rec.outcome = apply_classifier(T > th.threshold_T, th, reg.rng);
    project(reg, q, in);
    rec.post_state = reg.truth;
    rec.elapsed = measurement_model_time + ctx.integrate.t_end;
    return rec;
}

namespace {

Outcome voted_measure(MoleculeRegister& reg, const SubspaceQuery& q, const Thermometer& th,
                      int vote_factor, std::vector<MeasurementRecord>& records)
{
    int heated = 0;
    for (int v = 0; v < vote_factor; ++v) {
        records.push_back(measure_subspace(reg, q, th));
        if (records.back().outcome == Outcome::heated) ++heated;
    }
    return (2 * heated > vote_factor) ? Outcome::heated : Outcome::not_heated;
}

}  // namespace

SearchResult binary_search_state(MoleculeRegister& reg, std::vector<int> candidates,
                                 const Thermometer& th, int max_steps, int vote_factor)
{
    if (candidates.empty()) throw std::invalid_argument("empty candidate set");
    std::sort(candidates.begin(), candidates.end());

    SearchResult res;
    int steps = 0;
    while (candidates.size() > 1) {
        if (steps >= max_steps) {
            res.surviving = candidates;
            return res;  // search failure carrying the surviving set
        }
        ++steps;
        const std::vector<int> half(candidates.begin(),
                                    candidates.begin() + candidates.size() / 2);
        const SubspaceQuery q = SubspaceQuery::over(half);
        const Outcome out = voted_measure(reg, q, th, vote_factor, res.records);
        if (out == Outcome::heated) {
            candidates = half;
        } else {
            candidates.erase(candidates.begin(), candidates.begin() + half.size());
        }
    }
    res.success = true;
    res.state = candidates.front();
    res.surviving = candidates;
    return res;
}

PrepareResult prepare_state(MoleculeRegister& reg, const SubspaceQuery& manifold, int bridge_a,
                            int target_b, const Thermometer& th, int max_rounds)
{
    if (!manifold.contains(bridge_a))
        throw std::invalid_argument("bridge state A must lie inside the manifold");
    if (manifold.contains(target_b))
        throw std::invalid_argument("target B must lie outside the manifold");

    PrepareResult res;
    // confirm membership before the first swap
    res.records.push_back(measure_subspace(reg, manifold, th));
    bool confirmed = res.records.back().outcome == Outcome::heated;

    for (int round = 0; round < max_rounds; ++round) {
        ++res.rounds;
        // slow, resolved A<->B pi-pulse with the lattice off: deterministic swap
        if (reg.truth == bridge_a) reg.truth = target_b;
        else if (reg.truth == target_b) reg.truth = bridge_a;

        res.records.push_back(measure_subspace(reg, manifold, th));
        const bool heated = res.records.back().outcome == Outcome::heated;
        if (confirmed && !heated) {
            res.success = true;  // herald: molecule is in |B>
            return res;
        }
        confirmed = confirmed || heated;
    }
    return res;
}

MeasurementRecord ensemble_measure(std::vector<MoleculeRegister>& regs, const SubspaceQuery& q,
                                   const Thermometer& th, std::uint64_t seed)
{
    if (regs.empty()) throw std::invalid_argument("need at least one register");
    q.validate();
    th.validate();
    bool any_in = false;
    for (auto& reg : regs) {
        const bool in = q.contains(reg.truth);
        any_in = any_in || in;
        project(reg, q, in);
    }
    std::mt19937_64 rng(seed);
    MeasurementRecord rec;
    rec.query_ids = q.members;
    rec.outcome = apply_classifier(any_in, th, rng);
    rec.post_state = -1;  // which molecule heated is not identifiable
    rec.elapsed = measurement_model_time;
    return rec;
}

std::vector<ScanPoint> spectroscopy_scan(const ScanPulse& pulse, const Thermometer& th,
                                         const std::vector<double>& detunings)
{
    th.validate();
    std::vector<ScanPoint> out;
    out.reserve(detunings.size());
    for (double delta : detunings) {
        pulses::InternalState st;
        st.amp = Eigen::VectorXcd::Zero(2);
        st.amp(0) = 1.0;
        std::vector<pulses::DriveField> fields;
        double t_end = 0.0;
        if (pulse.kind == ScanPulse::Kind::rabi) {
            fields.push_back({0, 1, pulse.rabi, delta, 0.0, {}, pulses::DriveKind::microwave});
            t_end = pulse.pulse_time;
        } else {
            const double tau = pulse.pulse_time;
            const double T = pulse.free_time;
            fields.push_back({0, 1, pulse.rabi, delta, 0.0,
                              {{0.0, tau}, {tau + T, 2.0 * tau + T}},
                              pulses::DriveKind::microwave});
            // free precession: detuning only
            fields.push_back({0, 1, 0.0, delta, 0.0, {{tau, tau + T}},
                              pulses::DriveKind::microwave});
            t_end = 2.0 * tau + T;
        }
        const double p = pulses::evolve(st, fields, t_end, 0.0).population(1);
        // classifier response on the destination-subspace readout
        const double p_obs = p * (1.0 - th.false_negative) + (1.0 - p) * th.false_positive;
        out.push_back({delta, p_obs});
    }
    return out;
}

}  // namespace polyion::protocol
