#include "optics.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "units.hpp"
#include "wigner.hpp"

namespace polyion::optics {

using std::numbers::pi;

void LatticeConfig::validate() const
{
    if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
    if (!(waist_radius > 0.0)) throw std::invalid_argument("waist must be positive");
    if (power_per_beam < 0.0) throw std::invalid_argument("power must be non-negative");
    auto norm = [](const std::array<double, 3>& v) {
        return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    };
    if (std::abs(norm(direction) - 1.0) > 1e-12)
        throw std::invalid_argument("direction must be a unit vector");
    if (std::abs(norm(polarization) - 1.0) > 1e-12)
        throw std::invalid_argument("polarization must be a unit vector");
    const double dot = direction[0] * polarization[0] + direction[1] * polarization[1] +
                       direction[2] * polarization[2];
    if (std::abs(dot) > 1e-12)
        throw std::invalid_argument("polarization must be orthogonal to direction");
}

double StatePotential::at(double z) const
{
    return U0 * std::cos(4.0 * pi * (z - offset_z0) / wavelength);
}

double StatePotential::slope(double z) const
{
    return -U0 * (4.0 * pi / wavelength) * std::sin(4.0 * pi * (z - offset_z0) / wavelength);
}

double peak_intensity(const LatticeConfig& cfg)
{
    cfg.validate();
    return 2.0 * cfg.power_per_beam / (pi * cfg.waist_radius * cfg.waist_radius);
}

double alpha_eff(const molspec::RotationalState& state, const molspec::MolecularSpecies& sp)
{
    sp.validate();
    const int J = state.J;
    if (state.eigvec.size() != 2 * J + 1)
        throw std::invalid_argument("state eigvec inconsistent with its J");

    const double alpha[3] = {sp.alpha_a, sp.alpha_b, sp.alpha_c};
    double result = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
        // <Phi_zg^2> = sum over intermediate |J'' k'' m> of |<..|Phi_zg|state>|^2
        double phi2 = 0.0;
        for (int Jpp = std::max(0, J - 1); Jpp <= J + 1; ++Jpp) {
            for (int kpp = -Jpp; kpp <= Jpp; ++kpp) {
                std::complex<double> amp = 0.0;
                for (int q = -1; q <= 1; ++q) {
                    const int k = kpp - q;
                    if (k < -J || k > J) continue;
                    const std::complex<double> cq = axis_spherical_coeff(axis, q);
                    if (cq == 0.0) continue;
                    amp += cq * state.eigvec(k + J) *
                           rot_d1_element(Jpp, kpp, state.m, 0, q, J, k, state.m);
                }
                phi2 += std::norm(amp);
            }
        }
        result += alpha[axis] * phi2;
    }
    return result;
}

double potential_depth(double alpha, double intensity)
{
    return alpha * intensity / (units::c * units::eps0);
}

StatePotential potential_profile(const molspec::RotationalState& state, int state_id,
                                 const molspec::MolecularSpecies& sp, const LatticeConfig& cfg)
{
    StatePotential pot;
    pot.state_id = state_id;
    pot.alpha_eff = alpha_eff(state, sp);
    pot.U0 = potential_depth(pot.alpha_eff, peak_intensity(cfg));
    pot.wavelength = cfg.wavelength;
    pot.offset_z0 = cfg.offset_z0;
    return pot;
}

StatePotential potential_profile_pinned(double alpha, int state_id, const LatticeConfig& cfg)
{
    StatePotential pot;
    pot.state_id = state_id;
    pot.alpha_eff = alpha;
    pot.U0 = potential_depth(alpha, peak_intensity(cfg));
    pot.wavelength = cfg.wavelength;
    pot.offset_z0 = cfg.offset_z0;
    return pot;
}

double lattice_secular_frequency(const StatePotential& pot, double mass)
{
    if (!(pot.U0 > 0.0)) throw std::domain_error("U0 must be positive");
    return std::sqrt(16.0 * pi * pi * pot.U0 / (pot.wavelength * pot.wavelength * mass));
}

double max_acceleration(const StatePotential& pot, double mass)
{
    return pot.U0 * (4.0 * pi / pot.wavelength) / mass;
}

}  // namespace polyion::optics
