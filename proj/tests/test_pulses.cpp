#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "pulses.hpp"
#include "units.hpp"

using namespace polyion;
using namespace polyion::pulses;
using cplx = std::complex<double>;

namespace {

InternalState basis_state(int n, int i)
{
    InternalState st;
    st.amp = Eigen::VectorXcd::Zero(n);
    st.amp(i) = 1.0;
    return st;
}

// independent reference: dense H for always-on fields, expm by scaled Taylor
Eigen::MatrixXcd taylor_propagator(const std::vector<DriveField>& fields, int n, double t)
{
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& f : fields) {
        H(f.i, f.j) += 0.5 * f.rabi * std::exp(cplx(0.0, f.phase));
        H(f.j, f.i) += 0.5 * f.rabi * std::exp(cplx(0.0, -f.phase));
        H(f.j, f.j) += f.detuning;
    }
    Eigen::MatrixXcd A = cplx(0.0, -1.0) * H * t;
    int squarings = 0;
    while (A.norm() > 0.25) {
        A *= 0.5;
        ++squarings;
    }
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
    for (int k = 1; k <= 30; ++k) {
        term = term * A / (double)k;
        U += term;
    }
    for (int s = 0; s < squarings; ++s) U = U * U;
    return U;
}

}  // namespace

TEST_CASE("resonant pi pulse inverts a two-level system")
{
    const double rabi = 2.0 * M_PI * 10e6;
    DriveField f{0, 1, rabi, 0.0, 0.0, {}, DriveKind::microwave};
    const double t_pi = M_PI / rabi;
    auto out = evolve(basis_state(2, 0), {f}, t_pi, 0.0);
    CHECK(out.population(1) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("detuned Rabi oscillation matches the closed form")
{
    const double rabi = 2.0 * M_PI * 5e6;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ud(-3.0, 3.0), ut(0.1, 4.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double det = ud(rng) * rabi;
        const double W = std::hypot(rabi, det);
        const double t = ut(rng) * 2.0 * M_PI / W;
        DriveField f{0, 1, rabi, det, 0.7, {}, DriveKind::microwave};
        auto out = evolve(basis_state(2, 0), {f}, t, 0.0);
        const double want =
            (rabi * rabi) / (W * W) * std::pow(std::sin(0.5 * W * t), 2);
        CHECK(out.population(1) == doctest::Approx(want).epsilon(1e-7));
    }
}

TEST_CASE("multi-level propagation matches an independent Taylor-series expm")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.2, 1.5), uph(0.0, 2.0 * M_PI);
    const double scale = 2.0 * M_PI * 1e6;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<DriveField> fields = {
            {0, 1, u(rng) * scale, u(rng) * scale, uph(rng), {}, DriveKind::microwave},
            {1, 2, u(rng) * scale, u(rng) * scale, uph(rng), {}, DriveKind::raman},
            {0, 3, u(rng) * scale, u(rng) * scale, uph(rng), {}, DriveKind::microwave},
        };
        const double t = 3.0e-6;
        auto U = taylor_propagator(fields, 4, t);
        for (int i0 = 0; i0 < 4; ++i0) {
            auto out = evolve(basis_state(4, i0), fields, t, 0.0);
            for (int k = 0; k < 4; ++k)
                CHECK(std::abs(out.amp(k) - U(k, i0)) < 1e-8);
        }
    }
}

TEST_CASE("unitarity and composition of the propagator")
{
    std::vector<DriveField> fields = {
        {0, 1, 2.0 * M_PI * 3e6, 2.0 * M_PI * 1e6, 0.4, {}, DriveKind::microwave},
        {1, 2, 2.0 * M_PI * 2e6, -2.0 * M_PI * 0.5e6, 1.1, {}, DriveKind::microwave},
    };
    InternalState st = basis_state(3, 0);
    st.amp(0) = 0.6;
    st.amp(1) = cplx(0.0, 0.8);
    const double t1 = 0.4e-6, t2 = 0.9e-6, dt = 1e-9;

    auto full = evolve(st, fields, t1 + t2, dt);
    CHECK(full.norm() == doctest::Approx(1.0).epsilon(1e-10));

    // time-independent fields: evolving in two stages composes
    auto stage1 = evolve(st, fields, t1, dt);
    auto stage2 = evolve(stage1, fields, t2, dt);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(full.amp(k) - stage2.amp(k)) < 1e-9);
}

TEST_CASE("two-level populations are invariant under a drive phase shift")
{
    const double rabi = 2.0 * M_PI * 4e6;
    const double t = 0.13e-6;
    for (double ph : {0.0, 0.9, 2.3, -1.2}) {
        DriveField f{0, 1, rabi, 0.3 * rabi, ph, {}, DriveKind::microwave};
        auto out = evolve(basis_state(2, 0), {f}, t, 0.0);
        DriveField f0{0, 1, rabi, 0.3 * rabi, 0.0, {}, DriveKind::microwave};
        auto ref = evolve(basis_state(2, 0), {f0}, t, 0.0);
        CHECK(out.population(1) == doctest::Approx(ref.population(1)).epsilon(1e-10));
    }
}

TEST_CASE("windowed fields: nothing happens outside the envelope")
{
    const double rabi = 2.0 * M_PI * 10e6;
    const double t_pi = M_PI / rabi;
    DriveField f{0, 1, rabi, 0.0, 0.0, {{1e-6, 1e-6 + t_pi}}, DriveKind::microwave};
    auto mid = evolve(basis_state(2, 0), {f}, 1e-6, 0.0);
    CHECK(mid.population(0) == doctest::Approx(1.0).epsilon(1e-12));
    auto out = evolve(basis_state(2, 0), {f}, 3e-6, 0.0);
    CHECK(out.population(1) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("conflicting simultaneous drives on one pair are rejected")
{
    std::vector<DriveField> fields = {
        {0, 1, 1e6, 0.0, 0.0, {}, DriveKind::microwave},
        {0, 1, 2e6, 0.0, 1.0, {}, DriveKind::microwave},
    };
    CHECK_THROWS_AS(evolve(basis_state(2, 0), fields, 1e-6, 0.0), std::invalid_argument);
}

TEST_CASE("rabi_from_voltage reproduces the reference drive strength")
{
    const double W = rabi_from_voltage(0.3, 2.0 * units::debye, 300e-6);
    CHECK(W / (2.0 * M_PI) == doctest::Approx(10e6).epsilon(5e-2));
    CHECK(W == doctest::Approx(2.0 * M_PI * 0.3 * 2.0 * units::debye /
                               (300e-6 * units::h)).epsilon(1e-12));
}

TEST_CASE("pi pulse schedule: first at zero, sorted, Poisson gap statistics")
{
    const double rate = 2e6, t_end = 5e-3;
    auto s = pi_pulse_schedule(rate, t_end, 123);
    REQUIRE(!s.empty());
    CHECK(s.front() == 0.0);
    for (size_t i = 1; i < s.size(); ++i) {
        CHECK(s[i] > s[i - 1]);
        CHECK(s[i] < t_end);
    }
    double mean_gap = (s.back() - s.front()) / (double)(s.size() - 1);
    CHECK(mean_gap == doctest::Approx(1.0 / rate).epsilon(0.05));
    // determinism
    auto s2 = pi_pulse_schedule(rate, t_end, 123);
    CHECK(s == s2);
    auto s3 = pi_pulse_schedule(rate, t_end, 124);
    CHECK(s != s3);
}

TEST_CASE("analytic chiral pulse set gives unit contrast")
{
    const double rabi = 2.0 * M_PI * 10e6;
    const auto p = analytic_chiral_params(rabi);
    const auto r = chiral_result(p);
    CHECK(r.contrast == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::min(r.P_B_R, r.P_B_S) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(std::max(r.P_B_R, r.P_B_S) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("a pi shift on any single field swaps the favored enantiomer")
{
    const double rabi = 2.0 * M_PI * 10e6;
    const auto base = analytic_chiral_params(rabi);
    const auto r0 = chiral_result(base);
    for (int which = 0; which < 3; ++which) {
        auto p = base;
        (which == 0 ? p.phase_ab : which == 1 ? p.phase_ac : p.phase_cb) += M_PI;
        const auto r = chiral_result(p);
        CHECK(r.P_B_R == doctest::Approx(r0.P_B_S).epsilon(1e-8));
        CHECK(r.P_B_S == doctest::Approx(r0.P_B_R).epsilon(1e-8));
    }
}

TEST_CASE("chiral optimizer reaches high contrast deterministically")
{
    const double rabi = 2.0 * M_PI * 10e6;
    auto p = optimize_chiral(rabi, 7, 8);
    auto r = chiral_result(p);
    CHECK(r.contrast >= 0.99);
    auto p2 = optimize_chiral(rabi, 7, 8);
    CHECK(p.phase_ab == p2.phase_ab);
    CHECK(p.duration == p2.duration);
}
