#pragma once

// Physical constants (CODATA 2018) and unit conversions.
// Internal convention is SI; rotational energies are carried in Hz
// (divide by h at the boundary where joules are produced).

namespace polyion::units {

inline constexpr double h = 6.62607015e-34;        // J s
inline constexpr double hbar = 1.054571817e-34;    // J s
inline constexpr double kB = 1.380649e-23;         // J/K
inline constexpr double c = 2.99792458e8;          // m/s
inline constexpr double eps0 = 8.8541878128e-12;   // F/m
inline constexpr double qe = 1.602176634e-19;      // C
inline constexpr double amu = 1.66053906660e-27;   // kg
inline constexpr double coulomb_k = 8.9875517873681764e9;  // 1/(4 pi eps0)

inline constexpr double debye = 3.33564095198e-30;  // C m
inline constexpr double GHz = 1e9;
inline constexpr double MHz = 1e6;

// polarizability volume (angstrom^3) -> SI polarizability (C m^2 / V)
inline constexpr double alpha_A3_to_SI = 4.0 * 3.14159265358979323846 * eps0 * 1e-30;

}  // namespace polyion::units
