#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <tuple>

#include "units.hpp"

namespace polyion::runner {

namespace fs = std::filesystem;
using namespace polyion;

namespace {

const std::vector<std::string> experiments = {"levels", "transitions", "alpha", "potential",
                                              "heat",   "readout",     "search", "prepare",
                                              "chiral", "scan"};

json default_params(const std::string& experiment)
{
    if (experiment == "levels") return {{"J_max", 12}, {"cutoff_K", 10.0}};
    if (experiment == "transitions")
        return {{"J_max", 12}, {"cutoff_K", 10.0}, {"f_min_GHz", 0.0}, {"f_max_GHz", 2000.0},
                {"split_GHz", 20.0}};
    if (experiment == "alpha") return {{"J_max", 3}, {"cutoff_K", 10.0}};
    if (experiment == "potential")
        return {{"states", json::array({"0_0_0_0", "1_0_1_0"})},
                {"z_min_nm", -600.0}, {"z_max_nm", 600.0}, {"n_points", 241}};
    if (experiment == "heat")
        return {{"n_traj", 50},      {"t_end_ms", 2.0},      {"dt_ns", 5.0},
                {"T_init_mK", 0.02}, {"n_bins", 20},         {"record_stride", 40},
                {"state_lo", "0_0_0_0"}, {"state_hi", "1_0_1_0"}, {"flips", true}};
    if (experiment == "readout")
        return {{"t_end_ms", 4.0},  {"dt_ns", 5.0}, {"T_init_mK", 0.01},
                {"window_ms", 0.5}, {"state_lo", "0_0_0_0"}, {"state_hi", "1_0_1_0"},
                {"in_subspace", true}};
    if (experiment == "search")
        return {{"n_runs", 200}, {"n_states", 50}, {"T_K", 10.0}, {"vote_factor", 1},
                {"max_steps", 64}};
    if (experiment == "prepare")
        return {{"n_runs", 200}, {"manifold_size", 4}, {"max_rounds", 500},
                {"target", "0_0_0_0"}};
    if (experiment == "chiral") return {{"optimize", false}, {"rabi_MHz", 10.0}};
    if (experiment == "scan")
        return {{"kind", "rabi"}, {"rabi_kHz", 1.0}, {"free_time_ms", 0.0},
                {"span_kHz", 8.0}, {"n_points", 81}};
    return json::object();
}

json parse_override_value(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::exception&) {
        return json(text);  // bare string
    }
}

void apply_override(json& params, const std::string& key, const std::string& value)
{
    json* node = &params;
    std::istringstream is(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(is, part, '.')) parts.push_back(part);
    if (parts.empty()) throw std::invalid_argument("empty override key");
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->contains(parts[i]))
            throw std::invalid_argument("unknown override key: " + key);
        node = &((*node)[parts[i]]);
    }
    if (!node->contains(parts.back()))
        throw std::invalid_argument("unknown override key: " + key);
    (*node)[parts.back()] = parse_override_value(value);
}

struct Context {
    molspec::MolecularSpecies species;
    config::Setup setup;
    json params;  // fully resolved parameter document
    std::uint64_t seed = 0;
    fs::path out;
    int n_threads = 1;
    json meta;
};

void write_text(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void write_json(const fs::path& path, const json& j)
{
    write_text(path, j.dump(2) + "\n");
}

std::string csv_meta_line(const json& meta)
{
    std::ostringstream os;
    os << "# config_hash=" << meta.at("config_hash").get<std::string>()
       << " seed=" << meta.at("seed").get<std::uint64_t>()
       << " version=" << meta.at("version").get<std::string>() << "\n";
    return os.str();
}

// "J_Ka_Kc_m" -> state id in table
int state_by_label(const molspec::LevelTable& table, const std::string& label)
{
    int v[4] = {0, 0, 0, 0};
    std::istringstream is(label);
    std::string tok;
    for (int i = 0; i < 4; ++i) {
        if (!std::getline(is, tok, '_'))
            throw std::invalid_argument("bad state label: " + label);
        v[i] = std::stoi(tok);
    }
    const int id = table.find(v[0], v[1], v[2], v[3]);
    if (id < 0) throw std::invalid_argument("state not in table: " + label);
    return id;
}

double alpha_for_state(const Context& ctx, const molspec::LevelTable& table, int id)
{
    const auto& st = table.levels[id];
    const double ov = ctx.setup.override_for(st.J, st.Ka, st.Kc, st.m);
    if (!std::isnan(ov)) return ov;
    return optics::alpha_eff(st, ctx.species);
}

Eigen::Vector3d lattice_axis(const config::Setup& s)
{
    return Eigen::Vector3d(s.lattice.direction[0], s.lattice.direction[1],
                           s.lattice.direction[2]);
}

// ---------------------------------------------------------------- experiments

void run_levels(const Context& ctx)
{
    const auto& p = ctx.params.at("levels");
    const double cutoff = p.at("cutoff_K").get<double>() * units::kB / units::h;
    const auto table = molspec::solve_levels(ctx.species, p.at("J_max").get<int>(), cutoff);

    json levels = json::array();
    for (int i = 0; i < table.size(); ++i) {
        const auto& s = table.levels[i];
        levels.push_back({{"id", i}, {"J", s.J}, {"Ka", s.Ka}, {"Kc", s.Kc}, {"m", s.m},
                          {"energy_GHz", s.energy / units::GHz}});
    }
    write_json(ctx.out / "levels.json", {{"meta", ctx.meta}, {"levels", levels}});
    write_json(ctx.out / "summary.json",
               {{"meta", ctx.meta},
                {"n_states", table.size()},
                {"n_distinct_levels", table.distinct_levels()},
                {"cutoff_GHz", cutoff / units::GHz}});
}

void run_transitions(const Context& ctx)
{
    const auto& p = ctx.params.at("transitions");
    const double cutoff = p.at("cutoff_K").get<double>() * units::kB / units::h;
    const auto table = molspec::solve_levels(ctx.species, p.at("J_max").get<int>(), cutoff);
    const auto cat = molspec::allowed_transitions(table, ctx.species,
                                                  p.at("f_min_GHz").get<double>() * units::GHz,
                                                  p.at("f_max_GHz").get<double>() * units::GHz);
    json doc = export_grotrian(table, cat, p.at("split_GHz").get<double>() * units::GHz);
    doc["meta"] = ctx.meta;
    write_json(ctx.out / "grotrian.json", doc);
}

void run_alpha(const Context& ctx)
{
    const auto& p = ctx.params.at("alpha");
    const double cutoff = p.at("cutoff_K").get<double>() * units::kB / units::h;
    const auto table = molspec::solve_levels(ctx.species, p.at("J_max").get<int>(), cutoff);
    json rows = json::array();
    for (int i = 0; i < table.size(); ++i) {
        const auto& s = table.levels[i];
        rows.push_back({{"id", i}, {"J", s.J}, {"Ka", s.Ka}, {"Kc", s.Kc}, {"m", s.m},
                        {"alpha_eff_SI", alpha_for_state(ctx, table, i)}});
    }
    write_json(ctx.out / "alpha_eff.json", {{"meta", ctx.meta}, {"states", rows}});
}

void run_potential(const Context& ctx)
{
    const auto& p = ctx.params.at("potential");
    const auto table = molspec::solve_levels(ctx.species, 4, 1e15);
    std::vector<int> ids;
    for (const auto& label : p.at("states")) ids.push_back(state_by_label(table, label));

    std::ostringstream csv;
    csv << csv_meta_line(ctx.meta);
    csv << "z_nm";
    std::vector<optics::StatePotential> pots;
    for (int id : ids) {
        const auto& s = table.levels[id];
        pots.push_back(optics::potential_profile_pinned(alpha_for_state(ctx, table, id), id,
                                                        ctx.setup.lattice));
        csv << ",U_" << s.J << "_" << s.Ka << "_" << s.Kc << "_" << s.m << "_over_h_MHz";
    }
    csv << "\n";
    const double z0 = p.at("z_min_nm").get<double>();
    const double z1 = p.at("z_max_nm").get<double>();
    const int n = p.at("n_points").get<int>();
    for (int i = 0; i < n; ++i) {
        const double z = z0 + (z1 - z0) * i / (n - 1);
        csv << format_double(z);
        for (const auto& pot : pots)
            csv << "," << format_double(pot.at(z * 1e-9) / units::h / units::MHz);
        csv << "\n";
    }
    write_text(ctx.out / "potential.csv", csv.str());
}

trapdyn::IntegrateOptions heat_options(const Context& ctx, const json& p,
                                       const molspec::LevelTable& table, bool flips)
{
    trapdyn::IntegrateOptions opt;
    opt.t_end = p.at("t_end_ms").get<double>() * 1e-3;
    opt.dt = p.at("dt_ns").get<double>() * 1e-9;
    opt.record_stride = p.value("record_stride", 40);
    opt.lattice_direction = lattice_axis(ctx.setup);
    const int lo = state_by_label(table, p.at("state_lo").get<std::string>());
    const int hi = state_by_label(table, p.at("state_hi").get<std::string>());
    opt.potentials.push_back(optics::potential_profile_pinned(alpha_for_state(ctx, table, lo), lo,
                                                              ctx.setup.lattice));
    opt.potentials.push_back(optics::potential_profile_pinned(alpha_for_state(ctx, table, hi), hi,
                                                              ctx.setup.lattice));
    // the configured lattice offset is measured from the molecule's rest position
    const double s_mol =
        trapdyn::equilibrium_positions(ctx.setup.trap).segment<3>(3).dot(opt.lattice_direction);
    for (auto& pot : opt.potentials) pot.offset_z0 += s_mol;
    opt.initial_label = 0;
    if (flips) opt.flips = trapdyn::FlipProcess{ctx.setup.gamma_flip, 0, 1, ctx.seed};
    return opt;
}

void run_heat(const Context& ctx)
{
    const auto& p = ctx.params.at("heat");
    const auto table = molspec::solve_levels(ctx.species, 4, 1e15);
    const auto opt = heat_options(ctx, p, table, p.at("flips").get<bool>());
    const double T_init = p.at("T_init_mK").get<double>() * 1e-3;

    const auto res = trapdyn::heating_rate(ctx.setup.trap, opt, T_init,
                                           p.at("n_traj").get<int>(), ctx.seed, ctx.n_threads,
                                           p.at("n_bins").get<int>());

    std::ostringstream hash;
    hash << std::hex << params_hash(ctx.params, ctx.seed);
    json bins = json::array();
    for (std::size_t i = 0; i < res.bin_times.size(); ++i)
        bins.push_back({{"t_ms", res.bin_times[i] * 1e3}, {"T_mK", res.bin_temps[i] * 1e3}});
    write_json(ctx.out / "heating.json",
               {{"meta", ctx.meta},
                {"rate_K_per_s", res.rate},
                {"stderr", res.stderr_},
                {"n_traj", res.n_traj},
                {"r_squared", res.r_squared},
                {"bins", bins},
                {"params_hash", hash.str()},
                {"seed", ctx.seed}});

    // one example trajectory for plotting
    const auto nm = trapdyn::normal_modes(ctx.setup.trap);
    auto o = opt;
    if (o.flips) o.flips->seed = trapdyn::mix_seed(ctx.seed, 1);
    const auto ic = trapdyn::sample_thermal_state(ctx.setup.trap, nm, T_init,
                                                  trapdyn::mix_seed(ctx.seed, 0));
    const auto traj = trapdyn::integrate(ctx.setup.trap, nm, ic, o);
    std::ostringstream csv;
    csv << csv_meta_line(ctx.meta);
    csv << "t_us,x1_nm,y1_nm,z1_nm,x2_nm,y2_nm,z2_nm,label,E_total_mK\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        csv << format_double(traj.times[i] * 1e6);
        for (int c = 0; c < 3; ++c) csv << "," << format_double(traj.pos_atom[i](c) * 1e9);
        for (int c = 0; c < 3; ++c) csv << "," << format_double(traj.pos_mol[i](c) * 1e9);
        csv << "," << traj.internal_label[i] << ","
            << format_double(traj.energies[i] / units::kB * 1e3) << "\n";
    }
    write_text(ctx.out / "trajectory.csv", csv.str());
}

void run_readout(const Context& ctx)
{
    const auto& p = ctx.params.at("readout");
    const auto table = molspec::solve_levels(ctx.species, 4, 1e15);

    protocol::FullModelContext fm;
    fm.trap = ctx.setup.trap;
    fm.integrate = heat_options(ctx, p, table, true);
    fm.T_init = p.at("T_init_mK").get<double>() * 1e-3;
    fm.readout_window = p.at("window_ms").get<double>() * 1e-3;
    fm.seed = ctx.seed;

    const int lo = fm.integrate.potentials[0].state_id;
    const int hi = fm.integrate.potentials[1].state_id;
    auto q = protocol::SubspaceQuery::over({lo, hi});
    protocol::Thermometer th = ctx.setup.thermometer;
    if (th.threshold_T <= 0.0) th.threshold_T = 10.0 * fm.T_init;

    const bool in = p.at("in_subspace").get<bool>();
    protocol::MoleculeRegister reg(in ? lo : state_by_label(table, "1_1_0_0"),
                                   {}, trapdyn::mix_seed(ctx.seed, 7));
    const auto rec = protocol::measure_subspace_full(reg, q, th, fm);

    std::ostringstream lines;
    lines << json{{"run_id", 0},
                  {"step", 0},
                  {"query_ids", rec.query_ids},
                  {"outcome", rec.outcome == protocol::Outcome::heated ? "heated" : "not_heated"},
                  {"post_state", rec.post_state},
                  {"t_model_ms", rec.elapsed * 1e3}}
                 .dump()
          << "\n";
    write_text(ctx.out / "readout.jsonl", lines.str());
    write_json(ctx.out / "readout_summary.json",
               {{"meta", ctx.meta},
                {"in_subspace", in},
                {"outcome", rec.outcome == protocol::Outcome::heated ? "heated" : "not_heated"}});
}

void append_records(std::ostringstream& lines, int run_id,
                    const std::vector<protocol::MeasurementRecord>& records)
{
    int step = 0;
    for (const auto& rec : records) {
        lines << json{{"run_id", run_id},
                      {"step", step++},
                      {"query_ids", rec.query_ids},
                      {"outcome",
                       rec.outcome == protocol::Outcome::heated ? "heated" : "not_heated"},
                      {"post_state", rec.post_state},
                      {"t_model_ms", rec.elapsed * 1e3}}
                     .dump()
              << "\n";
    }
}

void run_search(const Context& ctx)
{
    const auto& p = ctx.params.at("search");
    const double cutoff = 10.0 * units::kB / units::h;
    const auto table = molspec::solve_levels(ctx.species, 12, cutoff);
    const auto pops = molspec::thermal_populations(table, p.at("T_K").get<double>());

    // candidate set: the most-populated states
    const int n_states = std::min<int>(p.at("n_states").get<int>(), table.size());
    std::vector<int> order(table.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return pops[a] > pops[b]; });
    std::vector<int> candidates(order.begin(), order.begin() + n_states);
    std::sort(candidates.begin(), candidates.end());

    std::vector<double> prior(table.size(), 0.0);
    double mass = 0.0;
    for (int id : candidates) mass += pops[id];
    for (int id : candidates) prior[id] = pops[id] / mass;

    const int n_runs = p.at("n_runs").get<int>();
    std::ostringstream lines;
    int successes = 0, correct = 0;
    double mean_meas = 0.0;
    int max_meas = 0;
    for (int r = 0; r < n_runs; ++r) {
        auto reg = protocol::MoleculeRegister::from_prior(prior, trapdyn::mix_seed(ctx.seed, r));
        const auto res = protocol::binary_search_state(reg, candidates, ctx.setup.thermometer,
                                                       p.at("max_steps").get<int>(),
                                                       p.at("vote_factor").get<int>());
        append_records(lines, r, res.records);
        if (res.success) {
            ++successes;
            if (res.state == reg.truth) ++correct;
        }
        mean_meas += (double)res.records.size();
        max_meas = std::max(max_meas, (int)res.records.size());
    }
    write_text(ctx.out / "search.jsonl", lines.str());
    write_json(ctx.out / "search_summary.json",
               {{"meta", ctx.meta},
                {"n_runs", n_runs},
                {"n_candidates", n_states},
                {"success_rate", (double)successes / n_runs},
                {"identification_rate", (double)correct / n_runs},
                {"mean_measurements", mean_meas / n_runs},
                {"max_measurements", max_meas}});
}

void run_prepare(const Context& ctx)
{
    const auto& p = ctx.params.at("prepare");
    const double cutoff = 10.0 * units::kB / units::h;
    const auto table = molspec::solve_levels(ctx.species, 12, cutoff);
    const int target = state_by_label(table, p.at("target").get<std::string>());
    const auto cat = molspec::allowed_transitions(table, ctx.species, 0.0, 1e15);

    // manifold: lowest-energy states excluding the target; bridge must have an
    // allowed transition to the target
    const int n = p.at("manifold_size").get<int>();
    std::vector<int> manifold;
    for (int i = 0; i < table.size() && (int)manifold.size() < n; ++i)
        if (i != target) manifold.push_back(i);
    int bridge = -1;
    auto level_of = [&](int id) {
        const auto& s = table.levels[id];
        return std::make_tuple(s.J, s.Ka, s.Kc);
    };
    for (int id : manifold) {
        for (const auto& e : cat.entries) {
            const bool match = (level_of(e.lower) == level_of(id) &&
                                level_of(e.upper) == level_of(target)) ||
                               (level_of(e.upper) == level_of(id) &&
                                level_of(e.lower) == level_of(target));
            if (match) {
                bridge = id;
                break;
            }
        }
        if (bridge >= 0) break;
    }
    if (bridge < 0)
        throw std::invalid_argument("no allowed bridge transition into the target state");

    const auto q = protocol::SubspaceQuery::over(manifold);
    const int n_runs = p.at("n_runs").get<int>();
    std::ostringstream lines;
    int successes = 0;
    double mean_rounds = 0.0;
    for (int r = 0; r < n_runs; ++r) {
        std::mt19937_64 pick(trapdyn::mix_seed(ctx.seed, 1000 + r));
        std::uniform_int_distribution<int> u(0, (int)manifold.size() - 1);
        protocol::MoleculeRegister reg(manifold[u(pick)], {}, trapdyn::mix_seed(ctx.seed, r));
        const auto res = protocol::prepare_state(reg, q, bridge, target, ctx.setup.thermometer,
                                                 p.at("max_rounds").get<int>());
        append_records(lines, r, res.records);
        if (res.success) {
            ++successes;
            mean_rounds += res.rounds;
        }
    }
    write_text(ctx.out / "prepare.jsonl", lines.str());
    write_json(ctx.out / "prepare_summary.json",
               {{"meta", ctx.meta},
                {"n_runs", n_runs},
                {"manifold_size", (int)manifold.size()},
                {"success_rate", (double)successes / n_runs},
                {"mean_rounds", successes ? mean_rounds / successes : 0.0}});
}

void run_chiral(const Context& ctx)
{
    const auto& p = ctx.params.at("chiral");
    const double rabi = p.at("rabi_MHz").get<double>() * 2.0 * M_PI * units::MHz;
    const auto params = p.at("optimize").get<bool>()
                            ? pulses::optimize_chiral(rabi, ctx.seed)
                            : pulses::analytic_chiral_params(rabi);
    const auto res = pulses::chiral_result(params);
    write_json(ctx.out / "chiral.json",
               {{"meta", ctx.meta},
                {"P_B_R", res.P_B_R},
                {"P_B_S", res.P_B_S},
                {"contrast", res.contrast},
                {"phase_ab", params.phase_ab},
                {"phase_ac", params.phase_ac},
                {"phase_cb", params.phase_cb},
                {"duration_us", params.duration * 1e6}});
}

void run_scan(const Context& ctx)
{
    const auto& p = ctx.params.at("scan");
    protocol::ScanPulse pulse;
    pulse.rabi = p.at("rabi_kHz").get<double>() * 2.0 * M_PI * 1e3;
    if (p.at("kind").get<std::string>() == "ramsey") {
        pulse.kind = protocol::ScanPulse::Kind::ramsey;
        pulse.pulse_time = 0.5 * M_PI / pulse.rabi;
        pulse.free_time = p.at("free_time_ms").get<double>() * 1e-3;
    } else {
        pulse.kind = protocol::ScanPulse::Kind::rabi;
        pulse.pulse_time = M_PI / pulse.rabi;
    }
    const double span = p.at("span_kHz").get<double>() * 2.0 * M_PI * 1e3;
    const int n = p.at("n_points").get<int>();
    std::vector<double> detunings(n);
    for (int i = 0; i < n; ++i) detunings[i] = -span / 2.0 + span * i / (n - 1);

    const auto pts = protocol::spectroscopy_scan(pulse, ctx.setup.thermometer, detunings);
    std::ostringstream csv;
    csv << csv_meta_line(ctx.meta);
    csv << "detuning_kHz,transfer_prob\n";
    for (const auto& pt : pts)
        csv << format_double(pt.detuning / (2.0 * M_PI * 1e3)) << ","
            << format_double(pt.transfer_prob) << "\n";
    write_text(ctx.out / "scan.csv", csv.str());
}

}  // namespace

bool known_experiment(const std::string& name)
{
    return std::find(experiments.begin(), experiments.end(), name) != experiments.end();
}

json export_grotrian(const molspec::LevelTable& table, const molspec::TransitionCatalog& catalog,
                     double split_freq)
{
    json levels = json::array();
    for (int i = 0; i < table.size(); ++i) {
        const auto& s = table.levels[i];
        levels.push_back({{"id", i}, {"J", s.J}, {"Ka", s.Ka}, {"Kc", s.Kc}, {"m", s.m},
                          {"energy_GHz", s.energy / units::GHz}});
    }
    json transitions = json::array();
    const char* names[3] = {"a", "b", "c"};
    for (const auto& e : catalog.entries)
        transitions.push_back({{"lo", e.lower},
                               {"hi", e.upper},
                               {"freq_GHz", e.frequency / units::GHz},
                               {"strength", e.line_strength},
                               {"type", names[(int)e.type]},
                               {"above_split", e.frequency > split_freq}});
    return {{"levels", levels},
            {"transitions", transitions},
            {"split_freq_GHz", split_freq / units::GHz}};
}

std::uint64_t params_hash(const json& params, std::uint64_t seed)
{
    std::string text = params.dump();
    text += "|" + std::to_string(seed);
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string format_double(double x)
{
    return json(x).dump();  // shortest round-trip representation
}

std::vector<std::string> validate(const RunConfig& cfg)
{
    std::vector<std::string> diags;
    if (!known_experiment(cfg.experiment))
        diags.push_back("unknown experiment: " + cfg.experiment);
    for (const auto& [path, what] :
         {std::pair{cfg.species_path, "species"}, std::pair{cfg.setup_path, "setup"}}) {
        if (path.empty()) {
            diags.push_back(std::string("missing ") + what + " file path");
            continue;
        }
        json j;
        try {
            j = config::load_json_file(path);
        } catch (const std::exception& e) {
            diags.push_back(std::string(what) + ": " + e.what());
            continue;
        }
        const auto more = (std::string(what) == "species") ? config::validate_species_json(j)
                                                           : config::validate_setup_json(j);
        for (const auto& d : more) diags.push_back(std::string(what) + ": " + d);
    }
    return diags;
}

int run(const RunConfig& cfg, std::string* error)
{
    const auto diags = validate(cfg);
    if (!diags.empty()) {
        if (error) {
            std::ostringstream os;
            for (const auto& d : diags) os << d << "\n";
            *error = os.str();
        }
        return exit_schema;
    }
    try {
        Context ctx;
        json species_json = config::load_json_file(cfg.species_path);
        json setup_json = config::load_json_file(cfg.setup_path);

        ctx.params = {{"species", species_json},
                      {"setup", setup_json},
                      {cfg.experiment, default_params(cfg.experiment)}};
        if (setup_json.contains("experiments") &&
            setup_json.at("experiments").contains(cfg.experiment))
            ctx.params[cfg.experiment].update(setup_json.at("experiments").at(cfg.experiment));
        for (const auto& [k, v] : cfg.overrides) apply_override(ctx.params, k, v);

        ctx.species = config::species_from_json(ctx.params.at("species"));
        ctx.setup = config::setup_from_json(ctx.params.at("setup"), ctx.species.mass);
        ctx.seed = cfg.seed;
        ctx.n_threads = cfg.n_threads;
        ctx.out = cfg.out_dir;
        fs::create_directories(ctx.out);

        std::ostringstream hash;
        hash << std::hex << params_hash(ctx.params, cfg.seed);
        ctx.meta = {{"config_hash", hash.str()}, {"seed", cfg.seed}, {"version", version}};

        if (cfg.experiment == "levels") run_levels(ctx);
        else if (cfg.experiment == "transitions") run_transitions(ctx);
        else if (cfg.experiment == "alpha") run_alpha(ctx);
        else if (cfg.experiment == "potential") run_potential(ctx);
        else if (cfg.experiment == "heat") run_heat(ctx);
        else if (cfg.experiment == "readout") run_readout(ctx);
        else if (cfg.experiment == "search") run_search(ctx);
        else if (cfg.experiment == "prepare") run_prepare(ctx);
        else if (cfg.experiment == "chiral") run_chiral(ctx);
        else if (cfg.experiment == "scan") run_scan(ctx);
        return exit_ok;
    } catch (const std::invalid_argument& e) {
        if (error) *error = e.what();
        return exit_schema;
    } catch (const std::exception& e) {
        if (error) *error = e.what();
        return exit_numeric;
    }
}

}  // namespace polyion::runner
