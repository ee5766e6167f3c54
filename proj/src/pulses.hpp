#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace polyion::pulses {

enum class DriveKind { microwave, raman };

struct DriveField {
    int i = 0, j = 0;        // coupled pair, indices into the state vector
    double rabi = 0.0;       // rad/s
    double detuning = 0.0;   // rad/s, added on the diagonal of j
    double phase = 0.0;      // rad
    std::vector<std::pair<double, double>> windows;  // (t_on, t_off); empty = always on
    DriveKind kind = DriveKind::microwave;

    bool active_at(double t, double t_end) const;
};

struct InternalState {
    Eigen::VectorXcd amp;

    double population(int i) const { return std::norm(amp(i)); }
    double norm() const { return amp.norm(); }
};

struct EvolveRecord {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> states;
};

// Omega_R = 2 pi V D / (d h), rad/s
double rabi_from_voltage(double volts, double dipole, double electrode_spacing);

// Piecewise-constant rotating-frame propagation.  The Hamiltonian is
// rebuilt at every envelope boundary and exponentiated per dt step.
InternalState evolve(const InternalState& init, const std::vector<DriveField>& fields,
                     double t_end, double dt, EvolveRecord* record = nullptr);

// Poisson pi-pulse schedule: first pulse at t = 0, exponential gaps after.
std::vector<double> pi_pulse_schedule(double rate, double t_end, std::uint64_t seed);

enum class Enantiomer { R, S };

struct ChiralParams {
    double rabi_ab = 0.0, rabi_ac = 0.0, rabi_cb = 0.0;   // rad/s
    double phase_ab = 0.0, phase_ac = 0.0, phase_cb = 0.0;  // rad
    double duration = 0.0;  // s
};

struct ChiralResult {
    double P_B_R = 0.0, P_B_S = 0.0;
    double contrast = 0.0;  // |P_B_R - P_B_S|
};

// Simultaneous three-path drive from |A>; S flips the sign of the C<->B
// coupling (the dipole triple product changes sign between enantiomers).
double chiral_transfer(const ChiralParams& p, Enantiomer e, double dt = 0.0);

ChiralResult chiral_result(const ChiralParams& p);

// Closed-form full-contrast set: equal Rabi rates, pi/2 hop phases around
// the A->B->C->A loop, duration 8 pi / (3 sqrt(3) Omega).
ChiralParams analytic_chiral_params(double rabi);

// Local contrast search (random restarts + coordinate refinement).
ChiralParams optimize_chiral(double rabi, std::uint64_t seed, int n_restarts = 40);

}  // namespace polyion::pulses
