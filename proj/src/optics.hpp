#pragma once

#include <array>

#include "molspec.hpp"

namespace polyion::optics {

struct LatticeConfig {
    double power_per_beam = 0.0;  // W
    double wavelength = 0.0;      // m
    double waist_radius = 0.0;    // m
    double offset_z0 = 0.0;       // m, lattice maximum to trap center
    std::array<double, 3> direction = {0, 0, 1};
    std::array<double, 3> polarization = {1, 0, 0};

    void validate() const;  // throws std::invalid_argument
};

struct StatePotential {
    int state_id = -1;
    double alpha_eff = 0.0;  // C m^2 / V
    double U0 = 0.0;         // J
    double wavelength = 0.0;  // m
    double offset_z0 = 0.0;   // m

    // U(z) along the lattice axis, z measured from the trap center
    double at(double z) const;
    // dU/dz
    double slope(double z) const;
};

// I0 = 2 P / (pi w0^2)
double peak_intensity(const LatticeConfig& cfg);

// <state| sum_g alpha_g Phi_{zg}^2 |state>, first order (no lattice-induced
// mixing), lab axis = lattice polarization.
double alpha_eff(const molspec::RotationalState& state, const molspec::MolecularSpecies& sp);

// depth from polarizability and intensity: U0 = alpha_eff I0 / (c eps0)
double potential_depth(double alpha_eff, double intensity);

StatePotential potential_profile(const molspec::RotationalState& state, int state_id,
                                 const molspec::MolecularSpecies& sp, const LatticeConfig& cfg);

// same profile with the tensor computation bypassed by a pinned alpha_eff
StatePotential potential_profile_pinned(double alpha_eff, int state_id, const LatticeConfig& cfg);

// omega_lattice = sqrt(16 pi^2 U0 / (lambda^2 m)), rad/s
double lattice_secular_frequency(const StatePotential& pot, double mass);

// |a_max| = U0 (4 pi / lambda) / m
double max_acceleration(const StatePotential& pot, double mass);

}  // namespace polyion::optics
