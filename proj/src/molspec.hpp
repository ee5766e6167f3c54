#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace polyion::molspec {

struct MolecularSpecies {
    std::string name;
    double mass = 0.0;  // kg
    double A = 0.0, B = 0.0, C = 0.0;        // rotational constants, Hz
    double mu_a = 0.0, mu_b = 0.0, mu_c = 0.0;  // dipole components, C m
    double alpha_a = 0.0, alpha_b = 0.0, alpha_c = 0.0;  // C m^2 / V

    double alpha_mean() const { return (alpha_a + alpha_b + alpha_c) / 3.0; }
    // throws std::invalid_argument on violated invariants
    void validate() const;
};

// One asymmetric-top eigenstate |J_{Ka Kc}, m>.  eigvec holds real
// coefficients over the |J,k> symmetric-top basis, k = -J..J.
struct RotationalState {
    int J = 0;
    int Ka = 0, Kc = 0;
    int m = 0;
    double energy = 0.0;  // Hz, relative to 0_00
    Eigen::VectorXd eigvec;
};

struct LevelTable {
    MolecularSpecies species;
    std::vector<RotationalState> levels;  // sorted by energy, m expanded
    double max_energy_cutoff = 0.0;       // Hz

    int size() const { return (int)levels.size(); }
    // number of distinct (J,Ka,Kc) levels
    int distinct_levels() const;
    // index of the first state matching (J,Ka,Kc,m), -1 if absent
    int find(int J, int Ka, int Kc, int m) const;
};

enum class TransitionType { a, b, c };

struct Transition {
    int lower = 0, upper = 0;     // state ids (representative m member of each level)
    double frequency = 0.0;       // Hz, > 0
    double line_strength = 0.0;   // dimensionless, m-summed, in units of mu_g^2
    TransitionType type = TransitionType::a;
};

struct TransitionCatalog {
    std::vector<Transition> entries;
};

// Rigid-rotor Hamiltonian block H = A Ja^2 + B Jb^2 + C Jc^2 in the |J,k>
// basis (I^r representation, molecular z along the a axis).  (2J+1)x(2J+1), Hz.
Eigen::MatrixXd build_hamiltonian_block(const MolecularSpecies& sp, int J);

// Diagonalize J = 0..J_max, keep states below cutoff (Hz), expand m substates,
// assign Ka/Kc by within-J energy order.
LevelTable solve_levels(const MolecularSpecies& sp, int J_max, double cutoff);

// Boltzmann populations over table states at temperature T (K).
std::vector<double> thermal_populations(const LevelTable& table, double T);

// Electric-dipole allowed transitions with frequency in [f_min, f_max].
TransitionCatalog allowed_transitions(const LevelTable& table, const MolecularSpecies& sp,
                                      double f_min, double f_max);

// m-summed line strength between two levels for dipole axis g in {0,1,2},
// in units of mu_g^2.  States are identified by any m member of the level.
double line_strength(const LevelTable& table, int lo_id, int up_id, int axis);

}  // namespace polyion::molspec
