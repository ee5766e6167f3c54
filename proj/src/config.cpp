#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "units.hpp"

namespace polyion::config {

json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

molspec::MolecularSpecies species_from_json(const json& j)
{
    molspec::MolecularSpecies sp;
    sp.name = j.value("name", "unnamed");
    sp.mass = j.at("mass_amu").get<double>() * units::amu;
    sp.A = j.at("A_GHz").get<double>() * units::GHz;
    sp.B = j.at("B_GHz").get<double>() * units::GHz;
    sp.C = j.at("C_GHz").get<double>() * units::GHz;
    sp.mu_a = j.value("mu_a_D", 0.0) * units::debye;
    sp.mu_b = j.value("mu_b_D", 0.0) * units::debye;
    sp.mu_c = j.value("mu_c_D", 0.0) * units::debye;
    sp.alpha_a = j.at("alpha_a_A3").get<double>() * units::alpha_A3_to_SI;
    sp.alpha_b = j.at("alpha_b_A3").get<double>() * units::alpha_A3_to_SI;
    sp.alpha_c = j.at("alpha_c_A3").get<double>() * units::alpha_A3_to_SI;
    sp.validate();
    return sp;
}

json species_to_json(const molspec::MolecularSpecies& sp)
{
    return {{"name", sp.name},
            {"mass_amu", sp.mass / units::amu},
            {"A_GHz", sp.A / units::GHz},
            {"B_GHz", sp.B / units::GHz},
            {"C_GHz", sp.C / units::GHz},
            {"mu_a_D", sp.mu_a / units::debye},
            {"mu_b_D", sp.mu_b / units::debye},
            {"mu_c_D", sp.mu_c / units::debye},
            {"alpha_a_A3", sp.alpha_a / units::alpha_A3_to_SI},
            {"alpha_b_A3", sp.alpha_b / units::alpha_A3_to_SI},
            {"alpha_c_A3", sp.alpha_c / units::alpha_A3_to_SI}};
}

double Setup::override_for(int J, int Ka, int Kc, int m) const
{
    if (alpha_eff_override.is_null()) return std::nan("");
    std::ostringstream key;
    key << J << "_" << Ka << "_" << Kc << "_" << m;
    if (!alpha_eff_override.contains(key.str())) return std::nan("");
    return alpha_eff_override.at(key.str()).get<double>();
}

Setup setup_from_json(const json& j, double molecule_mass)
{
    Setup s;
    s.raw = j;

    const json& t = j.at("trap");
    const double twopi = 2.0 * M_PI;
    s.trap.secular_atom = {t.at("omega_x_MHz").get<double>() * twopi * units::MHz,
                           t.at("omega_y_MHz").get<double>() * twopi * units::MHz,
                           t.at("omega_z_MHz").get<double>() * twopi * units::MHz};
    s.trap.atom_mass = t.at("atom_mass_amu").get<double>() * units::amu;
    s.trap.molecule_mass = molecule_mass;
    s.trap.charge = units::qe;
    s.trap.validate();

    const json& l = j.at("lattice");
    s.lattice.power_per_beam = l.at("power_W").get<double>();
    s.lattice.wavelength = l.at("wavelength_nm").get<double>() * 1e-9;
    s.lattice.waist_radius = l.at("waist_um").get<double>() * 1e-6;
    s.lattice.offset_z0 = l.at("offset_over_lambda").get<double>() * s.lattice.wavelength;
    for (int i = 0; i < 3; ++i) {
        s.lattice.direction[i] = l.at("direction").at(i).get<double>();
        s.lattice.polarization[i] = l.at("polarization").at(i).get<double>();
    }
    s.lattice.validate();

    if (j.contains("drive")) {
        const json& d = j.at("drive");
        if (d.contains("rabi_MHz"))
            s.rabi = d.at("rabi_MHz").get<double>() * twopi * units::MHz;
        s.gamma_flip = d.value("gamma_flip_MHz", 0.0) * units::MHz;
    }
    if (j.contains("thermometer")) {
        const json& th = j.at("thermometer");
        s.thermometer.threshold_T = th.value("threshold_T_mK", 0.0) * 1e-3;
        s.thermometer.false_positive = th.value("false_positive", 0.0);
        s.thermometer.false_negative = th.value("false_negative", 0.0);
        s.thermometer.validate();
    }
    s.alpha_eff_override =
        j.contains("alpha_eff_override") ? j.at("alpha_eff_override") : json(nullptr);
    return s;
}

namespace {

void require_number(const json& j, const std::string& key, std::vector<std::string>& out,
                    bool positive = false)
{
    if (!j.contains(key)) {
        out.push_back("missing field: " + key);
        return;
    }
    if (!j.at(key).is_number()) {
        out.push_back("field is not a number: " + key);
        return;
    }
    if (positive && !(j.at(key).get<double>() > 0.0))
        out.push_back("field must be positive: " + key);
}

}  // namespace

std::vector<std::string> validate_species_json(const json& j)
{
    std::vector<std::string> diags;
    require_number(j, "mass_amu", diags, true);
    for (const char* k : {"A_GHz", "B_GHz", "C_GHz"}) require_number(j, k, diags, true);
    for (const char* k : {"alpha_a_A3", "alpha_b_A3", "alpha_c_A3"}) require_number(j, k, diags);
    if (diags.empty()) {
        const double A = j.at("A_GHz").get<double>();
        const double B = j.at("B_GHz").get<double>();
        const double C = j.at("C_GHz").get<double>();
        if (!(A >= B && B >= C))
            diags.push_back("rotational constants must satisfy A_GHz >= B_GHz >= C_GHz");
        const double abar = (j.at("alpha_a_A3").get<double>() + j.at("alpha_b_A3").get<double>() +
                             j.at("alpha_c_A3").get<double>()) / 3.0;
        if (!(abar > 0.0)) diags.push_back("mean polarizability must be positive");
        for (const char* k : {"mu_a_D", "mu_b_D", "mu_c_D"})
            if (j.contains(k) && std::abs(j.at(k).get<double>()) > 100.0)
                diags.push_back(std::string(k) + " exceeds the 100 Debye sanity bound");
    }
    return diags;
}

std::vector<std::string> validate_setup_json(const json& j)
{
    std::vector<std::string> diags;
    if (!j.contains("trap")) {
        diags.push_back("missing section: trap");
    } else {
        for (const char* k : {"omega_x_MHz", "omega_y_MHz", "omega_z_MHz", "atom_mass_amu"})
            require_number(j.at("trap"), k, diags, true);
    }
    if (!j.contains("lattice")) {
        diags.push_back("missing section: lattice");
    } else {
        const json& l = j.at("lattice");
        require_number(l, "power_W", diags);
        require_number(l, "wavelength_nm", diags, true);
        require_number(l, "waist_um", diags, true);
        for (const char* k : {"direction", "polarization"}) {
            if (!l.contains(k) || !l.at(k).is_array() || l.at(k).size() != 3) {
                diags.push_back(std::string("lattice.") + k + " must be a 3-vector");
            }
        }
        if (l.contains("direction") && l.contains("polarization") && l.at("direction").is_array() &&
            l.at("polarization").is_array() && l.at("direction").size() == 3 &&
            l.at("polarization").size() == 3) {
            double dot = 0.0, nd = 0.0, np = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double d = l.at("direction").at(i).get<double>();
                const double p = l.at("polarization").at(i).get<double>();
                dot += d * p;
                nd += d * d;
                np += p * p;
            }
            if (std::abs(nd - 1.0) > 1e-9)
                diags.push_back("lattice.direction must be a unit vector");
            if (std::abs(np - 1.0) > 1e-9)
                diags.push_back("lattice.polarization must be a unit vector");
            if (std::abs(dot) > 1e-9)
                diags.push_back("lattice.polarization must be orthogonal to lattice.direction");
        }
    }
    if (j.contains("thermometer")) {
        for (const char* k : {"false_positive", "false_negative"}) {
            const json& th = j.at("thermometer");
            if (th.contains(k)) {
                const double p = th.at(k).get<double>();
                if (!(p >= 0.0 && p < 1.0))
                    diags.push_back(std::string("thermometer.") + k + " must be in [0, 1)");
            }
        }
    }
    return diags;
}

}  // namespace polyion::config
