#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "molspec.hpp"
#include "optics.hpp"
#include "protocol.hpp"
#include "trapdyn.hpp"

namespace polyion::config {

using nlohmann::json;

// Species config file keys: name, mass_amu, A_GHz, B_GHz, C_GHz,
// mu_a_D, mu_b_D, mu_c_D, alpha_a_A3, alpha_b_A3, alpha_c_A3.
molspec::MolecularSpecies species_from_json(const json& j);
json species_to_json(const molspec::MolecularSpecies& sp);

// Trap/lattice setup file: sections trap, lattice, drive, thermometer,
// optional alpha_eff_override (per-state label "J_Ka_Kc_m" -> SI value).
struct Setup {
    trapdyn::TrapConfig trap;
    optics::LatticeConfig lattice;
    double rabi = 0.0;        // rad/s
    double gamma_flip = 0.0;  // s^-1
    protocol::Thermometer thermometer;
    json alpha_eff_override;  // may be null
    json raw;

    // pinned alpha_eff for a labeled state, or NaN if not overridden
    double override_for(int J, int Ka, int Kc, int m) const;
};

Setup setup_from_json(const json& j, double molecule_mass);

// Collect all violations, not just the first.  Non-mutating.
std::vector<std::string> validate_species_json(const json& j);
std::vector<std::string> validate_setup_json(const json& j);

json load_json_file(const std::string& path);

}  // namespace polyion::config
