#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "optics.hpp"

namespace polyion::trapdyn {

// Secular frequencies are specified for the atomic ion; the molecule's are
// rescaled per pseudopotential scaling (radial ~ 1/m, axial DC ~ 1/sqrt(m)).
struct TrapConfig {
    Eigen::Vector3d secular_atom = {0, 0, 0};  // rad/s
    double atom_mass = 0.0;      // kg
    double molecule_mass = 0.0;  // kg
    double charge = 0.0;         // C, both ions

    Eigen::Vector3d secular_of(int ion) const;  // 0 = atom, 1 = molecule
    double mass_of(int ion) const { return ion == 0 ? atom_mass : molecule_mass; }
    void validate() const;
};

struct FlipProcess {
    double rate = 0.0;  // s^-1
    int label_lo = 0, label_hi = 1;
    std::uint64_t seed = 0;
};

struct NormalModes {
    Eigen::Matrix<double, 6, 1> frequencies;  // rad/s, ascending
    Eigen::Matrix<double, 6, 6> modes;        // columns, mass-weighted coords
    Eigen::Matrix<double, 6, 1> equilibrium;  // (r_atom, r_molecule)
    double potential_min = 0.0;               // J, trap + Coulomb at equilibrium
};

struct InitialCondition {
    Eigen::Vector3d pos[2];
    Eigen::Vector3d vel[2];
};

struct EnsembleTrajectory {
    std::vector<double> times;  // s, strictly increasing
    std::vector<Eigen::Vector3d> pos_atom, pos_mol, vel_atom, vel_mol;
    std::vector<int> internal_label;
    std::vector<double> energies;      // J, secular energy (lattice excluded)
    std::vector<double> lattice_impulse;  // kg m/s, accumulated along lattice axis
    std::vector<int> flip_count;
    std::vector<double> flip_times;    // s
};

struct IntegrateOptions {
    double t_end = 0.0;
    double dt = 0.0;
    int record_stride = 1;
    Eigen::Vector3d lattice_direction = {0, 0, 1};
    // potentials indexed by internal label; empty = lattice off
    std::vector<optics::StatePotential> potentials;
    int initial_label = 0;
    std::optional<FlipProcess> flips;
};

struct HeatingResult {
    double rate = 0.0;    // K/s
    double stderr_ = 0.0;  // K/s
    int n_traj = 0;
    double r_squared = 0.0;
    std::vector<double> bin_times;  // s
    std::vector<double> bin_temps;  // K, ensemble mean
};

Eigen::Matrix<double, 6, 1> equilibrium_positions(const TrapConfig& trap, bool with_coulomb = true);

NormalModes normal_modes(const TrapConfig& trap, bool with_coulomb = true);

InitialCondition sample_thermal_state(const TrapConfig& trap, const NormalModes& nm, double T,
                                      std::uint64_t seed);

EnsembleTrajectory integrate(const TrapConfig& trap, const NormalModes& nm,
                             const InitialCondition& init, const IntegrateOptions& opt);

// T = <secular energy above minimum> / (6 kB) over the trailing window
double temperature_of(const EnsembleTrajectory& traj, const NormalModes& nm, double window);

HeatingResult heating_rate(const TrapConfig& trap, const IntegrateOptions& opt, double T_init,
                           int n_traj, std::uint64_t seed, int n_threads = 1, int n_bins = 20);

// seed mixing for independent per-trajectory streams
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace polyion::trapdyn
