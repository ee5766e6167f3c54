#include "polyion/polyion.h"

#include <cstring>
#include <string>

#include "optics.hpp"
#include "pulses.hpp"
#include "runner.hpp"

namespace {

thread_local std::string g_last_error;

polyion_status fail(polyion_status code, const std::string& msg)
{
    g_last_error = msg;
    return code;
}

template <typename F>
polyion_status guarded(F&& f)
{
    try {
        f();
        g_last_error.clear();
        return POLYION_OK;
    } catch (const std::invalid_argument& e) {
        return fail(POLYION_ERR_SCHEMA, e.what());
    } catch (const std::domain_error& e) {
        return fail(POLYION_ERR_SCHEMA, e.what());
    } catch (const std::exception& e) {
        return fail(POLYION_ERR_NUMERIC, e.what());
    }
}

}  // namespace

struct polyion_run_config {
    polyion::runner::RunConfig cfg;
};

extern "C" {

const char* polyion_version(void) { return polyion::runner::version; }

const char* polyion_last_error(void) { return g_last_error.c_str(); }

polyion_status polyion_run_config_create(polyion_run_config** out)
{
    if (!out) return fail(POLYION_ERR_SCHEMA, "null output pointer");
    *out = new polyion_run_config();
    g_last_error.clear();
    return POLYION_OK;
}

void polyion_run_config_destroy(polyion_run_config* cfg) { delete cfg; }

#define POLYION_REQUIRE(cond, msg) \
    if (!(cond)) return fail(POLYION_ERR_SCHEMA, msg)

polyion_status polyion_run_config_set_species_file(polyion_run_config* cfg, const char* path)
{
    POLYION_REQUIRE(cfg && path, "null argument");
    cfg->cfg.species_path = path;
    return POLYION_OK;
}

polyion_status polyion_run_config_set_setup_file(polyion_run_config* cfg, const char* path)
{
    POLYION_REQUIRE(cfg && path, "null argument");
    cfg->cfg.setup_path = path;
    return POLYION_OK;
}

polyion_status polyion_run_config_set_experiment(polyion_run_config* cfg, const char* name)
{
    POLYION_REQUIRE(cfg && name, "null argument");
    cfg->cfg.experiment = name;
    return POLYION_OK;
}

polyion_status polyion_run_config_set_seed(polyion_run_config* cfg, uint64_t seed)
{
    POLYION_REQUIRE(cfg, "null argument");
    cfg->cfg.seed = seed;
    return POLYION_OK;
}

polyion_status polyion_run_config_set_out_dir(polyion_run_config* cfg, const char* path)
{
    POLYION_REQUIRE(cfg && path, "null argument");
    cfg->cfg.out_dir = path;
    return POLYION_OK;
}

polyion_status polyion_run_config_set_override(polyion_run_config* cfg, const char* key,
                                               const char* value)
{
    POLYION_REQUIRE(cfg && key && value, "null argument");
    cfg->cfg.overrides.emplace_back(key, value);
    return POLYION_OK;
}

polyion_status polyion_run_config_set_threads(polyion_run_config* cfg, int n)
{
    POLYION_REQUIRE(cfg && n >= 1, "thread count must be >= 1");
    cfg->cfg.n_threads = n;
    return POLYION_OK;
}

int polyion_validate(const polyion_run_config* cfg, char* buf, size_t cap)
{
    if (!cfg) return -1;
    const auto diags = polyion::runner::validate(cfg->cfg);
    if (buf && cap > 0) {
        std::string joined;
        for (const auto& d : diags) {
            joined += d;
            joined += '\n';
        }
        const size_t n = std::min(cap - 1, joined.size());
        std::memcpy(buf, joined.data(), n);
        buf[n] = '\0';
    }
    return (int)diags.size();
}

polyion_status polyion_run(const polyion_run_config* cfg)
{
    if (!cfg) return fail(POLYION_ERR_SCHEMA, "null config");
    std::string err;
    const int rc = polyion::runner::run(cfg->cfg, &err);
    if (rc == polyion::runner::exit_ok) {
        g_last_error.clear();
        return POLYION_OK;
    }
    return fail(rc == polyion::runner::exit_schema ? POLYION_ERR_SCHEMA : POLYION_ERR_NUMERIC,
                err);
}

polyion_status polyion_peak_intensity(double power_W, double waist_m, double* out)
{
    POLYION_REQUIRE(out, "null output pointer");
    return guarded([&] {
        polyion::optics::LatticeConfig cfg;
        cfg.power_per_beam = power_W;
        cfg.waist_radius = waist_m;
        cfg.wavelength = 1.0;  // irrelevant for intensity
        *out = polyion::optics::peak_intensity(cfg);
    });
}

polyion_status polyion_potential_depth(double alpha_eff_SI, double intensity, double* out)
{
    POLYION_REQUIRE(out, "null output pointer");
    *out = polyion::optics::potential_depth(alpha_eff_SI, intensity);
    return POLYION_OK;
}

polyion_status polyion_lattice_secular_frequency(double U0_J, double wavelength_m, double mass_kg,
                                                 double* out)
{
    POLYION_REQUIRE(out, "null output pointer");
    return guarded([&] {
        polyion::optics::StatePotential pot;
        pot.U0 = U0_J;
        pot.wavelength = wavelength_m;
        *out = polyion::optics::lattice_secular_frequency(pot, mass_kg);
    });
}

polyion_status polyion_rabi_from_voltage(double volts, double dipole_Cm, double spacing_m,
                                         double* out)
{
    POLYION_REQUIRE(out, "null output pointer");
    return guarded(
        [&] { *out = polyion::pulses::rabi_from_voltage(volts, dipole_Cm, spacing_m); });
}

}  // extern "C"
