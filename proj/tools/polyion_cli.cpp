// polyion command line runner.  Thin front end over the shared-library C API.

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polyion/polyion.h"

int main(int argc, char** argv)
{
    CLI::App app{"polyion: trapped molecular ion state preparation/readout simulations"};

    std::string species, trap, experiment, out_dir = ".";
    std::uint64_t seed = 0;
    std::vector<std::string> sets;
    bool validate_only = false;

    app.add_option("--species", species, "species config JSON")->required();
    app.add_option("--trap", trap, "trap/lattice setup JSON")->required();
    app.add_option("--experiment", experiment,
                   "levels|transitions|alpha|potential|heat|readout|search|prepare|chiral|scan")
        ->required();
    app.add_option("--seed", seed, "RNG seed (explicit; no wall-clock default)")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--set", sets, "parameter override key=value (repeatable)");
    app.add_flag("--validate-only", validate_only, "report diagnostics and exit");

    CLI11_PARSE(app, argc, argv);

    std::unique_ptr<polyion_run_config, decltype(&polyion_run_config_destroy)> cfg(
        nullptr, &polyion_run_config_destroy);
    {
        polyion_run_config* raw = nullptr;
        if (polyion_run_config_create(&raw) != POLYION_OK) {
            std::fprintf(stderr, "error: %s\n", polyion_last_error());
            return 3;
        }
        cfg.reset(raw);
    }

    polyion_run_config_set_species_file(cfg.get(), species.c_str());
    polyion_run_config_set_setup_file(cfg.get(), trap.c_str());
    polyion_run_config_set_experiment(cfg.get(), experiment.c_str());
    polyion_run_config_set_seed(cfg.get(), seed);
    polyion_run_config_set_out_dir(cfg.get(), out_dir.c_str());
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
            return 2;
        }
        polyion_run_config_set_override(cfg.get(), kv.substr(0, eq).c_str(),
                                        kv.substr(eq + 1).c_str());
    }
    if (const char* env = std::getenv("POLYION_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) polyion_run_config_set_threads(cfg.get(), n);
    }

    char diag_buf[8192];
    const int n_diags = polyion_validate(cfg.get(), diag_buf, sizeof diag_buf);
    if (n_diags > 0) {
        std::fprintf(stderr, "%d diagnostic(s):\n%s", n_diags, diag_buf);
        return 2;
    }
    if (validate_only) {
        std::printf("ok\n");
        return 0;
    }

    const polyion_status rc = polyion_run(cfg.get());
    if (rc != POLYION_OK) {
        std::fprintf(stderr, "error: %s\n", polyion_last_error());
        return (int)rc;
    }
    return 0;
}
