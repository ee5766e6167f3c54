#include "pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "units.hpp"

namespace polyion::pulses {

using std::numbers::pi;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

bool DriveField::active_at(double t, double t_end) const
{
    if (windows.empty()) return t < t_end;
    for (const auto& [on, off] : windows)
        if (t >= on && t < off) return true;
    return false;
}

double rabi_from_voltage(double volts, double dipole, double electrode_spacing)
{
    if (!(volts >= 0.0 && dipole > 0.0 && electrode_spacing > 0.0))
        throw std::invalid_argument("voltage, dipole and spacing must be positive");
    return 2.0 * pi * volts * dipole / (electrode_spacing * units::h);
}

namespace {

void check_fields(const std::vector<DriveField>& fields, int dim)
{
    for (const auto& f : fields) {
        if (f.i < 0 || f.j < 0 || f.i >= dim || f.j >= dim || f.i == f.j)
            throw std::invalid_argument("field couples invalid state pair");
        if (f.rabi < 0.0) throw std::invalid_argument("rabi frequency must be non-negative");
        for (const auto& [on, off] : f.windows)
            if (!(on < off)) throw std::invalid_argument("field window requires t_on < t_off");
    }
    // distinct fields driving the same pair must not overlap in time
    for (std::size_t a = 0; a < fields.size(); ++a) {
        for (std::size_t b = a + 1; b < fields.size(); ++b) {
            const auto& fa = fields[a];
            const auto& fb = fields[b];
            const bool same_pair = (std::minmax(fa.i, fa.j) == std::minmax(fb.i, fb.j));
            if (!same_pair) continue;
            auto overlap = [](const DriveField& x, const DriveField& y) {
                if (x.windows.empty() || y.windows.empty()) return true;
                for (const auto& [a1, b1] : x.windows)
                    for (const auto& [a2, b2] : y.windows)
                        if (a1 < b2 && a2 < b1) return true;
                return false;
            };
            if (overlap(fa, fb))
                throw std::invalid_argument("conflicting field segments on the same pair");
        }
    }
}

MatrixXcd hamiltonian_at(const std::vector<DriveField>& fields, int dim, double t, double t_end)
{
    MatrixXcd H = MatrixXcd::Zero(dim, dim);
    for (const auto& f : fields) {
        if (!f.active_at(t, t_end)) continue;
        const std::complex<double> cpl =
            0.5 * f.rabi * std::exp(std::complex<double>(0.0, f.phase));
        H(f.i, f.j) += cpl;
        H(f.j, f.i) += std::conj(cpl);
        H(f.j, f.j) += f.detuning;
    }
    return H;
}

}  // namespace

InternalState evolve(const InternalState& init, const std::vector<DriveField>& fields,
                     double t_end, double dt, EvolveRecord* record)
{
    const int dim = (int)init.amp.size();
    check_fields(fields, dim);
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");

    double scale_max = 0.0;
    for (const auto& f : fields)
        scale_max = std::max({scale_max, f.rabi, std::abs(f.detuning)});
    if (dt <= 0.0) dt = (scale_max > 0.0) ? 0.01 * 2.0 * pi / scale_max : t_end;
    if (scale_max > 0.0 && dt > 0.02 * 2.0 * pi / scale_max + 1e-18)
        throw std::invalid_argument("dt too large for rotating-frame step");

    // segment boundaries where the active field set changes
    std::set<double> cuts = {0.0, t_end};
    for (const auto& f : fields)
        for (const auto& [on, off] : f.windows) {
            if (on > 0.0 && on < t_end) cuts.insert(on);
            if (off > 0.0 && off < t_end) cuts.insert(off);
        }

    InternalState st = init;
    auto cut = cuts.begin();
    auto prev = cut++;
    for (; cut != cuts.end(); ++cut, ++prev) {
        const double seg_start = *prev;
        const double seg_end = *cut;
        double t = seg_start;
        // midpoint evaluation keeps boundary rounding out of the window tests
        const MatrixXcd H =
            hamiltonian_at(fields, dim, 0.5 * (seg_start + seg_end), t_end);
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H);
        auto propagator = [&](double tau) {
            const VectorXcd ph =
                (std::complex<double>(0.0, -1.0) * tau * es.eigenvalues()).array().exp();
            return MatrixXcd(es.eigenvectors() * ph.asDiagonal() *
                             es.eigenvectors().adjoint());
        };
        const MatrixXcd U = propagator(dt);
        while (t + dt <= seg_end + 1e-15 * t_end) {
            st.amp = U * st.amp;
            t += dt;
            if (record) {
                record->times.push_back(t);
                record->states.push_back(st.amp);
            }
        }
        if (t < seg_end - 1e-15 * t_end) {
            st.amp = propagator(seg_end - t) * st.amp;
            t = seg_end;
            if (record) {
                record->times.push_back(t);
                record->states.push_back(st.amp);
            }
        }
    }
    return st;
}

std::vector<double> pi_pulse_schedule(double rate, double t_end, std::uint64_t seed)
{
    if (rate < 0.0) throw std::invalid_argument("rate must be non-negative");
    std::vector<double> times = {0.0};
    if (rate > 0.0) {
        std::mt19937_64 rng(seed);
        std::exponential_distribution<double> gap(rate);
        double t = 0.0;
        while (true) {
            t += gap(rng);
            if (t >= t_end) break;
            times.push_back(t);
        }
    }
    return times;
}

double chiral_transfer(const ChiralParams& p, Enantiomer e, double dt)
{
    if (!(p.rabi_ab > 0.0 && p.rabi_ac > 0.0 && p.rabi_cb > 0.0))
        throw std::invalid_argument("all three couplings must be nonzero");
    // states: 0 = A, 1 = B, 2 = C
    std::vector<DriveField> fields(3);
    fields[0] = {0, 1, p.rabi_ab, 0.0, p.phase_ab, {}, DriveKind::microwave};
    fields[1] = {0, 2, p.rabi_ac, 0.0, p.phase_ac, {}, DriveKind::microwave};
    const double phase_cb = p.phase_cb + ((e == Enantiomer::S) ? pi : 0.0);
    fields[2] = {2, 1, p.rabi_cb, 0.0, phase_cb, {}, DriveKind::microwave};

    InternalState st;
    st.amp = VectorXcd::Zero(3);
    st.amp(0) = 1.0;
    return evolve(st, fields, p.duration, dt).population(1);
}

ChiralResult chiral_result(const ChiralParams& p)
{
    ChiralResult r;
    r.P_B_R = chiral_transfer(p, Enantiomer::R);
    r.P_B_S = chiral_transfer(p, Enantiomer::S);
    r.contrast = std::abs(r.P_B_R - r.P_B_S);
    return r;
}

ChiralParams analytic_chiral_params(double rabi)
{
    ChiralParams p;
    p.rabi_ab = p.rabi_ac = p.rabi_cb = rabi;
    // pi/2 phase per hop around A->B->C->A; H(B,A) carries -phase_ab
    p.phase_ab = -pi / 2.0;
    p.phase_ac = pi / 2.0;
    p.phase_cb = pi / 2.0;
    p.duration = 8.0 * pi / (3.0 * std::sqrt(3.0) * rabi);
    return p;
}

ChiralParams optimize_chiral(double rabi, std::uint64_t seed, int n_restarts)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uphase(0.0, 2.0 * pi);
    std::uniform_real_distribution<double> utime(0.5, 12.0);

    auto contrast = [&](const ChiralParams& p) { return chiral_result(p).contrast; };

    ChiralParams best;
    double best_val = -1.0;
    for (int r = 0; r < n_restarts; ++r) {
        ChiralParams p;
        p.rabi_ab = p.rabi_ac = p.rabi_cb = rabi;
        p.phase_ab = uphase(rng);
        p.phase_ac = uphase(rng);
        p.phase_cb = uphase(rng);
        p.duration = utime(rng) / rabi;
        // compass search over phases and duration
        double step = 0.5;
        double val = contrast(p);
        while (step > 1e-4) {
            bool improved = false;
            double* coords[4] = {&p.phase_ab, &p.phase_ac, &p.phase_cb, &p.duration};
            const double scales[4] = {1.0, 1.0, 1.0, 1.0 / rabi};
            for (int c = 0; c < 4; ++c) {
                for (double dir : {+1.0, -1.0}) {
                    const double old = *coords[c];
                    *coords[c] = old + dir * step * scales[c];
                    if (c == 3 && p.duration <= 0.0) {
                        *coords[c] = old;
                        continue;
                    }
                    const double v = contrast(p);
                    if (v > val) {
                        val = v;
                        improved = true;
                        break;
                    }
                    *coords[c] = old;
                }
            }
            if (!improved) step *= 0.5;
        }
        if (val > best_val) {
            best_val = val;
            best = p;
        }
        if (best_val > 0.9999) break;
    }
    return best;
}

}  // namespace polyion::pulses
