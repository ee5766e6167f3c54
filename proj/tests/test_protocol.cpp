#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "protocol.hpp"

using namespace polyion;
using namespace polyion::protocol;

namespace {

const Thermometer noiseless{1e-3, 0.0, 0.0};
const Thermometer noisy{1e-3, 0.02, 0.02};

}  // namespace

TEST_CASE("subspace query validation: empty, disconnected, chain builder")
{
    CHECK_THROWS_AS(SubspaceQuery{}.validate(), std::invalid_argument);

    SubspaceQuery q;
    q.members = {0, 1, 2, 3};
    q.drive_plan = {{0, 1}, {2, 3}};  // two disconnected islands
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);

    q.drive_plan = {{0, 1}, {1, 2}, {2, 9}};  // references an outsider
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);

    const auto chain = SubspaceQuery::over({4, 7, 2});
    CHECK_NOTHROW(chain.validate());
    CHECK(chain.contains(7));
    CHECK(!chain.contains(3));
    CHECK(chain.drive_plan.size() == 2);
}

TEST_CASE("projective measurement: membership drives outcome, truth outside is untouched")
{
    const auto q = SubspaceQuery::over({1, 2, 3});
    for (int truth : {0, 5}) {
        MoleculeRegister reg(truth, {}, 11);
        const auto rec = measure_subspace(reg, q, noiseless);
        CHECK(rec.outcome == Outcome::not_heated);
        CHECK(rec.post_state == truth);
        CHECK(reg.truth == truth);
        CHECK(rec.elapsed == measurement_model_time);
        CHECK(rec.query_ids == q.members);
    }
    for (int truth : {1, 2, 3}) {
        MoleculeRegister reg(truth, {}, 13);
        const auto rec = measure_subspace(reg, q, noiseless);
        CHECK(rec.outcome == Outcome::heated);
        CHECK(q.contains(rec.post_state));
        CHECK(rec.post_state == reg.truth);
    }
}

TEST_CASE("re-randomization within the queried subspace is uniform")
{
    const auto q = SubspaceQuery::over({1, 2, 3, 4});
    std::map<int, int> counts;
    const int n = 40000;
    MoleculeRegister reg(1, {}, 5);
    for (int i = 0; i < n; ++i) {
        reg.truth = 2;
        const auto rec = measure_subspace(reg, q, noiseless);
        counts[rec.post_state]++;
    }
    for (int id : q.members)
        CHECK((double)counts[id] / n == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("classifier error rates are honored on average")
{
    const auto q = SubspaceQuery::over({1, 2});
    const int n = 50000;
    int fp = 0, fn = 0;
    MoleculeRegister reg(0, {}, 21);
    for (int i = 0; i < n; ++i) {
        reg.truth = 0;  // outside
        if (measure_subspace(reg, q, noisy).outcome == Outcome::heated) ++fp;
        reg.truth = 1;  // inside
        if (measure_subspace(reg, q, noisy).outcome == Outcome::not_heated) ++fn;
    }
    CHECK((double)fp / n == doctest::Approx(0.02).epsilon(0.15));
    CHECK((double)fn / n == doctest::Approx(0.02).epsilon(0.15));
}

TEST_CASE("noiseless binary search identifies the state in ceil(log2 n) queries")
{
    const int n = 50;
    const int qmax = (int)std::ceil(std::log2((double)n));
    std::vector<int> candidates(n);
    for (int i = 0; i < n; ++i) candidates[i] = i;

    for (int trial = 0; trial < 200; ++trial) {
        MoleculeRegister reg = MoleculeRegister::from_prior(
            std::vector<double>(n, 1.0), 100 + trial);
        auto res = binary_search_state(reg, candidates, noiseless, 3 * qmax);
        CHECK(res.success);
        CHECK(res.state == reg.truth);
        CHECK((int)res.records.size() <= qmax);
        CHECK(res.surviving == std::vector<int>{res.state});
    }
}

TEST_CASE("noisy binary search with majority voting still mostly succeeds")
{
    const int n = 16;
    std::vector<int> candidates(n);
    for (int i = 0; i < n; ++i) candidates[i] = i;
    int ok = 0;
    const int trials = 500;
    for (int trial = 0; trial < trials; ++trial) {
        MoleculeRegister reg = MoleculeRegister::from_prior(
            std::vector<double>(n, 1.0), 900 + trial);
        auto res = binary_search_state(reg, candidates, noisy, 200, 5);
        if (res.success && res.state == reg.truth) ++ok;
    }
    CHECK((double)ok / trials > 0.9);
}

TEST_CASE("search failure carries the surviving candidate set")
{
    MoleculeRegister reg(3, {}, 1);
    auto res = binary_search_state(reg, {0, 1, 2, 3, 4, 5, 6, 7}, noiseless, 1);
    CHECK(!res.success);
    CHECK(res.surviving.size() > 1);
}

TEST_CASE("heralded preparation: mean rounds follow the geometric prediction")
{
    for (int size : {2, 4, 8}) {
        std::vector<int> manifold(size);
        for (int i = 0; i < size; ++i) manifold[i] = i;
        const auto q = SubspaceQuery::over(manifold);
        const int bridge = 0, target = 100;

        long long rounds_sum = 0;
        const int trials = 20000;
        int successes = 0;
        for (int t = 0; t < trials; ++t) {
            MoleculeRegister reg(t % size, {}, 5000 + t);
            auto res = prepare_state(reg, q, bridge, target, noiseless, 100 * size);
            if (res.success) {
                ++successes;
                rounds_sum += res.rounds;
                CHECK(reg.truth == target);  // herald certifies |B>
            }
        }
        CHECK(successes == trials);
        const double mean = (double)rounds_sum / successes;
        CHECK(mean == doctest::Approx((double)size).epsilon(0.05));
    }
}

TEST_CASE("prepare_state rejects malformed bridge configuration")
{
    const auto q = SubspaceQuery::over({0, 1, 2});
    MoleculeRegister reg(0, {}, 2);
    CHECK_THROWS_AS(prepare_state(reg, q, 7, 100, noiseless, 10), std::invalid_argument);
    CHECK_THROWS_AS(prepare_state(reg, q, 0, 2, noiseless, 10), std::invalid_argument);
}

TEST_CASE("ensemble measurement is a noisy OR over the registers")
{
    const auto q = SubspaceQuery::over({1, 2});
    std::vector<MoleculeRegister> regs;
    for (int i = 0; i < 5; ++i) regs.emplace_back(0, std::vector<double>{}, 10 + i);

    auto rec = ensemble_measure(regs, q, noiseless, 3);
    CHECK(rec.outcome == Outcome::not_heated);
    CHECK(rec.post_state == -1);

    regs[3].truth = 2;  // one member inside
    rec = ensemble_measure(regs, q, noiseless, 3);
    CHECK(rec.outcome == Outcome::heated);
    CHECK(q.contains(regs[3].truth));  // re-randomized but still inside
    for (int i : {0, 1, 2, 4}) CHECK(regs[i].truth == 0);

    // p(heated) = 1 - (1 - p_in)^5 when each register is in q with prob p_in
    const int trials = 20000;
    int heated = 0;
    std::vector<double> prior = {1.0, 1.0};  // states {0, 1}: p_in = 0.5 via state 1
    for (int t = 0; t < trials; ++t) {
        std::vector<MoleculeRegister> ens;
        for (int i = 0; i < 5; ++i)
            ens.push_back(MoleculeRegister::from_prior(prior, 777 + 5 * t + i));
        if (ensemble_measure(ens, q, noiseless, 99 + t).outcome == Outcome::heated) ++heated;
    }
    const double want = 1.0 - std::pow(0.5, 5);
    CHECK((double)heated / trials == doctest::Approx(want).epsilon(0.02));
}

TEST_CASE("Rabi scan: peak height, symmetry, and linewidth near 0.8 / t")
{
    ScanPulse pulse;
    pulse.kind = ScanPulse::Kind::rabi;
    pulse.rabi = 2.0 * M_PI * 1e6;
    pulse.pulse_time = M_PI / pulse.rabi;

    std::vector<double> detunings;
    for (int k = -400; k <= 400; ++k) detunings.push_back(k * 2.0 * M_PI * 1e4);
    const auto pts = spectroscopy_scan(pulse, noisy, detunings);

    const int mid = 400;
    CHECK(pts[mid].transfer_prob == doctest::Approx(1.0 - 0.02).epsilon(1e-6));
    for (int k = 1; k < 400; ++k)
        CHECK(pts[mid - k].transfer_prob ==
              doctest::Approx(pts[mid + k].transfer_prob).epsilon(1e-9));

    // half-maximum crossing of the underlying lineshape
    const double half = 0.5 * (1.0 - 0.02 + 0.02);
    int k_half = -1;
    for (int k = mid; k < (int)pts.size(); ++k)
        if (pts[k].transfer_prob < half) { k_half = k; break; }
    REQUIRE(k_half > 0);
    const double fwhm_Hz = 2.0 * (pts[k_half].detuning / (2.0 * M_PI));
    CHECK(fwhm_Hz == doctest::Approx(0.8 / pulse.pulse_time).epsilon(0.05));
}

TEST_CASE("Ramsey scan: fringe period is 1 / free_time")
{
    ScanPulse pulse;
    pulse.kind = ScanPulse::Kind::ramsey;
    pulse.rabi = 2.0 * M_PI * 20e6;
    pulse.pulse_time = 0.5 * M_PI / pulse.rabi;  // pi/2 pulses
    pulse.free_time = 50e-6;

    const double period = 2.0 * M_PI / pulse.free_time;  // rad/s
    std::vector<double> detunings;
    for (int k = -2; k <= 2; ++k) detunings.push_back(k * period);
    for (int k : {-3, -1, 1, 3}) detunings.push_back(0.5 * k * period);
    const auto pts = spectroscopy_scan(pulse, noiseless, detunings);

    for (int k = 0; k < 5; ++k)
        CHECK(pts[k].transfer_prob == doctest::Approx(1.0).epsilon(1e-3));
    for (int k = 5; k < 9; ++k)
        CHECK(pts[k].transfer_prob == doctest::Approx(0.0).epsilon(1e-3));
}

#include <Eigen/Dense>

#include "optics.hpp"
#include "trapdyn.hpp"

namespace {

protocol::FullModelContext dynamics_context()
{
    protocol::FullModelContext fm;
    fm.trap.secular_atom = 2.0 * M_PI * Eigen::Vector3d(1e6, 1e6, 0.45e6);
    fm.trap.atom_mass = 88.0 * 1.66053906660e-27;
    fm.trap.molecule_mass = 76.0 * 1.66053906660e-27;
    fm.trap.charge = 1.602176634e-19;

    optics::LatticeConfig lat;
    lat.power_per_beam = 1.0;
    lat.wavelength = 1050e-9;
    lat.waist_radius = 10e-6;

    fm.integrate.t_end = 4e-3;
    fm.integrate.dt = 1.5e-8;
    fm.integrate.record_stride = 100;
    fm.integrate.lattice_direction = {0.5, 0.0, std::sqrt(0.75)};
    fm.integrate.potentials = {optics::potential_profile_pinned(2.0e-39, 0, lat),
                               optics::potential_profile_pinned(1.7e-39, 1, lat)};
    const double s_mol = trapdyn::equilibrium_positions(fm.trap)
                             .tail<3>()
                             .dot(fm.integrate.lattice_direction);
    for (auto& pot : fm.integrate.potentials)
        pot.offset_z0 = 0.105 * lat.wavelength + s_mol;
    fm.integrate.flips = trapdyn::FlipProcess{2e6, 0, 1, 0};
    fm.T_init = 0.01e-3;
    fm.readout_window = 0.5e-3;
    return fm;
}

}  // namespace

TEST_CASE("full-dynamics measurement: in-subspace heating trips a 10x threshold")
{
    auto fm = dynamics_context();
    const protocol::Thermometer th{10.0 * fm.T_init, 0.0, 0.0};
    const auto q = SubspaceQuery::over({0, 1});

    int heated = 0;
    const int trials = 100;
    for (int i = 0; i < trials; ++i) {
        fm.seed = 4000 + i;
        MoleculeRegister reg(0, {}, 6000 + i);
        const auto rec = measure_subspace_full(reg, q, th, fm);
        if (rec.outcome == Outcome::heated) ++heated;
        CHECK(q.contains(rec.post_state));
        CHECK(rec.elapsed == measurement_model_time + fm.integrate.t_end);
    }
    CHECK((double)heated / trials > 0.95);

    // a molecule outside the subspace sees a constant potential and stays cold
    for (int i = 0; i < 10; ++i) {
        fm.seed = 8000 + i;
        MoleculeRegister reg(5, {}, 9000 + i);
        const auto rec = measure_subspace_full(reg, q, th, fm);
        CHECK(rec.outcome == Outcome::not_heated);
        CHECK(rec.post_state == 5);
    }
}
