// Command-line front end: graph generation, spectral/hitting analysis,
// process simulation, exact oracles, and the bound report, all with
// replayable run manifests.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "coalesce/bounds.hpp"
#include "coalesce/chain.hpp"
#include "coalesce/error.hpp"
#include "coalesce/exact.hpp"
#include "coalesce/generators.hpp"
#include "coalesce/graph.hpp"
#include "coalesce/manifest.hpp"
#include "coalesce/montecarlo.hpp"
#include "coalesce/product.hpp"
#include "coalesce/version.hpp"

namespace {

using coalesce::Graph;
using nlohmann::ordered_json;

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw coalesce::Error("cannot open graph file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return coalesce::load_edge_list(buffer.str());
}

void write_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw coalesce::Error("cannot write output file '" + out_path + "'");
    out << text;
}

void write_json(const ordered_json& j, const std::string& out_path) {
    write_text(j.dump(2) + "\n", out_path);
}

std::string join_ints(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

// Applies a flat key=value config file to a parsed subcommand.  A value is
// used only when the matching option was absent from the command line, so
// explicit flags always win and config values beat built-in defaults.
void apply_config_file(CLI::App* sub, const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw coalesce::Error("config: cannot open '" + path + "'");
    const auto trim = [](const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string{};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string entry = trim(line);
        if (entry.empty() || entry[0] == '#') continue;
        const std::string where = path + ":" + std::to_string(line_no);
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw coalesce::ParamError("config: expected key=value at " + where);
        const std::string key = trim(entry.substr(0, eq));
        std::string value = trim(entry.substr(eq + 1));
        if (key.empty()) throw coalesce::ParamError("config: empty key at " + where);
        if (key == "config")
            throw coalesce::ParamError("config: files cannot chain other config files (" +
                                       where + ")");
        if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                                  (value.front() == '\'' && value.back() == '\'')))
            value = value.substr(1, value.size() - 2);
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr)
            throw coalesce::ParamError("config: unknown key '" + key + "' for '" +
                                       sub->get_name() + "' (" + where + ")");
        if (opt->count() > 0) continue;  // explicit command-line values win
        opt->add_result(value);
        opt->run_callback();
    }
}

int run_cli(const std::vector<std::string>& args);

// ---- generate ----------------------------------------------------------

struct GenerateArgs {
    std::string family;
    int n = 0;
    int r = 3;
    double alpha = 2.5;
    double p = 0.1;
    std::uint64_t seed = 1;
    std::string out;
    std::string config;
};

int cmd_generate(const GenerateArgs& a) {
    coalesce::FamilySpec spec;
    const auto family = coalesce::parse_family(a.family);
    if (!family) throw coalesce::ParamError("unknown family '" + a.family + "'");
    spec.family = *family;
    spec.n = a.n;
    spec.r = a.r;
    spec.alpha = a.alpha;
    spec.p = a.p;
    const Graph g = coalesce::generate(spec, a.seed);
    std::map<std::string, std::string> params{
        {"family", a.family},       {"n", std::to_string(a.n)},
        {"r", std::to_string(a.r)}, {"alpha", std::to_string(a.alpha)},
        {"p", std::to_string(a.p)}, {"seed", std::to_string(a.seed)},
        {"out", a.out},
    };
    const coalesce::RunManifest manifest =
        coalesce::make_manifest("generate", params, a.seed, &g);
    std::string text = "# manifest: " + manifest.to_json().dump() + "\n";
    text += g.to_edge_list();
    write_text(text, a.out);
    return 0;
}

// ---- analyze -----------------------------------------------------------

struct AnalyzeArgs {
    std::string graph;
    bool lazy = false;
    std::string out;
    std::string config;
};

int cmd_analyze(const AnalyzeArgs& a) {
    const Graph g = load_graph_file(a.graph);
    const coalesce::DegreeStats ds = coalesce::degree_stats(g);
    const coalesce::Chain chain = coalesce::walk_chain(g, a.lazy);
    const coalesce::Spectrum spec = coalesce::spectrum(chain);
    const coalesce::HittingSummary hits =
        coalesce::full_hitting(chain, &spec, /*compute_series=*/false);

    std::map<std::string, std::string> params{
        {"graph", a.graph},
        {"lazy", a.lazy ? "true" : "false"},
        {"out", a.out},
    };
    const coalesce::RunManifest manifest =
        coalesce::make_manifest("analyze", params, 0, &g);

    ordered_json j;
    j["manifest"] = manifest.to_json();
    j["n"] = ds.n;
    j["m"] = ds.m;
    j["min_degree"] = ds.min_degree;
    j["max_degree"] = ds.max_degree;
    j["average_degree"] = ds.avg_degree;
    j["nu"] = ds.nu;
    j["bipartite"] = g.is_bipartite();
    j["lazy"] = a.lazy;
    j["lambda2"] = spec.lambda2;
    j["lambda_min"] = spec.lambda_n;
    j["spectral_gap"] = spec.gap;
    try {
        j["mixing_time"] = coalesce::mixing_time(chain);
        j["mixing_note"] = "";
    } catch (const coalesce::Error& e) {
        j["mixing_time"] = nullptr;
        j["mixing_note"] = e.what();
    }
    j["h_max"] = hits.h_max;
    j["h_max_from"] = hits.argmax_from;
    j["h_max_to"] = hits.argmax_to;
    j["stationary_hit_max"] = hits.max_e_pi;
    j["z_max"] = hits.max_z;
    ordered_json e_pi = ordered_json::array();
    ordered_json z = ordered_json::array();
    for (const auto& p : hits.profiles) {
        e_pi.push_back(p.from_stationarity);
        z.push_back(p.z_from_hitting);
    }
    j["stationary_hitting"] = e_pi;
    j["z_diagonal"] = z;
    j["k_star"] = coalesce::k_star(ds);
    write_json(j, a.out);
    return 0;
}

// ---- simulate ----------------------------------------------------------

struct SimulateArgs {
    std::string process = "coalescing";
    std::string graph;
    bool lazy = false;
    long long trials = 1000;
    std::uint64_t seed = 1;
    long long step_cap = 0;
    int workers = 1;
    bool allow_periodic = false;
    bool record_first_meeting = false;
    std::vector<int> starts;
    std::vector<int> opinions;
    std::string out;
    std::string config;
};

int cmd_simulate(const SimulateArgs& a) {
    const Graph g = load_graph_file(a.graph);
    coalesce::ProcessConfig cfg;
    cfg.process = coalesce::parse_process(a.process);
    cfg.lazy = a.lazy;
    cfg.starts = a.starts;
    cfg.opinions = a.opinions;
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.step_cap = a.step_cap;
    cfg.workers = a.workers;
    cfg.allow_periodic = a.allow_periodic;
    cfg.record_first_meeting = a.record_first_meeting;
    const coalesce::SimOutcome outcome = coalesce::simulate(g, cfg);

    std::map<std::string, std::string> params{
        {"process", a.process},
        {"graph", a.graph},
        {"lazy", a.lazy ? "true" : "false"},
        {"trials", std::to_string(a.trials)},
        {"seed", std::to_string(a.seed)},
        {"step-cap", std::to_string(a.step_cap)},
        {"workers", std::to_string(a.workers)},
        {"allow-periodic", a.allow_periodic ? "true" : "false"},
        {"record-first-meeting", a.record_first_meeting ? "true" : "false"},
        {"out", a.out},
    };
    if (!a.starts.empty()) params["starts"] = join_ints(a.starts);
    if (!a.opinions.empty()) params["opinions"] = join_ints(a.opinions);
    const coalesce::RunManifest manifest =
        coalesce::make_manifest("simulate", params, a.seed, &g);

    ordered_json j;
    j["manifest"] = manifest.to_json();
    j["process"] = a.process;
    j["stats"] = coalesce::to_json(outcome.completion);
    if (outcome.first_meeting.has_value())
        j["first_meeting"] = coalesce::to_json(*outcome.first_meeting);
    write_json(j, a.out);
    return 0;
}

// ---- exact -------------------------------------------------------------

struct ExactArgs {
    std::string graph;
    std::string process = "coalescing";
    bool lazy = false;
    std::vector<int> starts;
    int target = 0;
    int start = 0;
    long long steps = 0;
    std::string out;
    std::string config;
};

int cmd_exact(const ExactArgs& a) {
    const Graph g = load_graph_file(a.graph);
    double value = 0.0;
    if (a.process == "coalescing") {
        value = coalesce::exact_coalescence_time(g, a.lazy);
    } else if (a.process == "voter") {
        value = coalesce::exact_voter_time(g, a.lazy);
    } else if (a.process == "meeting") {
        if (a.starts.size() < 2)
            throw coalesce::ParamError("meeting needs --starts with at least two vertices");
        value = coalesce::exact_meeting_time(g, a.starts, a.lazy);
    } else if (a.process == "survival") {
        value = coalesce::survival_probability(g, a.lazy, a.target, a.start, a.steps);
    } else {
        throw coalesce::ParamError("unknown exact process '" + a.process + "'");
    }

    std::map<std::string, std::string> params{
        {"graph", a.graph},
        {"process", a.process},
        {"lazy", a.lazy ? "true" : "false"},
        {"out", a.out},
    };
    if (!a.starts.empty()) params["starts"] = join_ints(a.starts);
    if (a.process == "survival") {
        params["target"] = std::to_string(a.target);
        params["start"] = std::to_string(a.start);
        params["steps"] = std::to_string(a.steps);
    }
    const coalesce::RunManifest manifest =
        coalesce::make_manifest("exact", params, 0, &g);

    ordered_json j;
    j["manifest"] = manifest.to_json();
    j["process"] = a.process;
    j["value"] = value;
    write_json(j, a.out);
    return 0;
}

// ---- bounds ------------------------------------------------------------

struct BoundsArgs {
    std::string graph;
    bool simple = false;
    long long trials = 2000;
    std::uint64_t seed = 1;
    int workers = 1;
    long long product_cap = 2500;
    std::string format = "json";
    std::string out;
    std::string config;
};

int cmd_bounds(const BoundsArgs& a) {
    const Graph g = load_graph_file(a.graph);
    coalesce::ReportOptions opt;
    opt.lazy = !a.simple;
    opt.mc_trials = a.trials;
    opt.seed = a.seed;
    opt.workers = a.workers;
    opt.product_cap = a.product_cap;
    const coalesce::BoundsReport report = coalesce::make_report(g, opt);

    std::map<std::string, std::string> params{
        {"graph", a.graph},
        {"simple", a.simple ? "true" : "false"},
        {"trials", std::to_string(a.trials)},
        {"seed", std::to_string(a.seed)},
        {"workers", std::to_string(a.workers)},
        {"product-cap", std::to_string(a.product_cap)},
        {"format", a.format},
        {"out", a.out},
    };
    const coalesce::RunManifest manifest =
        coalesce::make_manifest("bounds", params, a.seed, &g);

    if (a.format == "csv") {
        std::string text = "# manifest: " + manifest.to_json().dump() + "\n";
        text += report.to_csv();
        write_text(text, a.out);
    } else if (a.format == "json") {
        ordered_json j;
        j["manifest"] = manifest.to_json();
        j["report"] = report.to_json();
        write_json(j, a.out);
    } else {
        throw coalesce::ParamError("unknown format '" + a.format + "'");
    }
    return report.all_literal_pass() ? 0 : 3;
}

// ---- replay ------------------------------------------------------------

struct ReplayArgs {
    std::string manifest_path;
    std::string out_override;
};

ordered_json extract_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw coalesce::Error("cannot open manifest file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.contains("manifest")) return j.at("manifest");
        if (j.contains("command")) return j;
    } catch (const nlohmann::json::parse_error&) {
        // fall through to comment scan
    }
    std::istringstream lines(text);
    std::string line;
    const std::string tag = "# manifest:";
    while (std::getline(lines, line)) {
        if (line.rfind(tag, 0) == 0)
            return nlohmann::json::parse(line.substr(tag.size()));
    }
    throw coalesce::Error("no run manifest found in '" + path + "'");
}

int cmd_replay(const ReplayArgs& a) {
    const ordered_json mj = extract_manifest(a.manifest_path);
    coalesce::RunManifest manifest = coalesce::RunManifest::from_json(mj);
    if (!a.out_override.empty()) manifest.params["out"] = a.out_override;

    // Refuse to replay against a changed input graph.
    const auto graph_it = manifest.params.find("graph");
    if (graph_it != manifest.params.end() && !manifest.graph_sha.empty()) {
        const Graph g = load_graph_file(graph_it->second);
        const std::string digest = coalesce::hex64(coalesce::graph_digest(g));
        if (digest != manifest.graph_sha)
            throw coalesce::Error("input graph '" + graph_it->second +
                                  "' no longer matches the manifest digest");
    }

    std::vector<std::string> args{manifest.command};
    for (const auto& [key, value] : manifest.params) {
        if (value.empty()) continue;
        if (value == "true") {
            args.push_back("--" + key);
        } else if (value == "false") {
            continue;
        } else if (key == "out") {
            args.push_back("-o");
            args.push_back(value);
        } else {
            args.push_back("--" + key);
            args.push_back(value);
        }
    }
    return run_cli(args);
}

// ---- wiring ------------------------------------------------------------

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"coalescing random walks, consensus dynamics, and spectral bound checks"};
    app.set_version_flag("--version", coalesce::version_string);
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* sub_gen = app.add_subcommand("generate", "write an edge list for a graph family");
    sub_gen->add_option("--family", gen.family,
                        "complete|cycle|path|star|dumbbell|random-regular|power-law|erdos-renyi")
        ->required();
    sub_gen->add_option("--n", gen.n, "vertex count")->required();
    sub_gen->add_option("--r", gen.r, "degree for random-regular");
    sub_gen->add_option("--alpha", gen.alpha, "power-law exponent (2,3)");
    sub_gen->add_option("--p", gen.p, "edge probability for erdos-renyi");
    sub_gen->add_option("--seed", gen.seed, "master seed");
    sub_gen->add_option("-o,--out", gen.out, "output path (default stdout)");
    sub_gen->add_option("--config", gen.config,
                        "flat key=value config file (command-line values win)");

    AnalyzeArgs ana;
    auto* sub_ana = app.add_subcommand("analyze", "degree, spectral, and hitting summary");
    sub_ana->add_option("--graph", ana.graph, "edge-list file")->required();
    sub_ana->add_flag("--lazy", ana.lazy, "use the lazy walk");
    sub_ana->add_option("-o,--out", ana.out, "output path (default stdout)");
    sub_ana->add_option("--config", ana.config,
                        "flat key=value config file (command-line values win)");

    SimulateArgs sim;
    auto* sub_sim = app.add_subcommand("simulate", "Monte Carlo process sampling");
    sub_sim->add_option("--process", sim.process, "coalescing|voter|tokens");
    sub_sim->add_option("--graph", sim.graph, "edge-list file")->required();
    sub_sim->add_flag("--lazy", sim.lazy, "use lazy dynamics");
    sub_sim->add_option("--trials", sim.trials, "number of trials")
        ->check(CLI::PositiveNumber);
    sub_sim->add_option("--seed", sim.seed, "master seed");
    sub_sim->add_option("--step-cap", sim.step_cap, "per-trial step cap (0 = 10^7 n)");
    sub_sim->add_option("--workers", sim.workers, "worker threads")
        ->check(CLI::PositiveNumber);
    sub_sim->add_flag("--allow-periodic", sim.allow_periodic,
                      "run simple walks on bipartite graphs (capped exploration)");
    sub_sim->add_flag("--record-first-meeting", sim.record_first_meeting,
                      "also report the first-meeting step");
    sub_sim->add_option("--starts", sim.starts, "start vertices (comma separated)")
        ->delimiter(',');
    sub_sim->add_option("--opinions", sim.opinions,
                        "initial opinion per vertex (comma separated)")
        ->delimiter(',');
    sub_sim->add_option("-o,--out", sim.out, "output path (default stdout)");
    sub_sim->add_option("--config", sim.config,
                        "flat key=value config file (command-line values win)");

    ExactArgs exa;
    auto* sub_exa = app.add_subcommand("exact", "exact oracle values");
    sub_exa->add_option("--graph", exa.graph, "edge-list file")->required();
    sub_exa->add_option("--process", exa.process, "coalescing|voter|meeting|survival");
    sub_exa->add_flag("--lazy", exa.lazy, "use lazy dynamics");
    sub_exa->add_option("--starts", exa.starts, "meeting start vertices")->delimiter(',');
    sub_exa->add_option("--target", exa.target, "survival: vertex to avoid");
    sub_exa->add_option("--start", exa.start, "survival: walk start");
    sub_exa->add_option("--steps", exa.steps, "survival: horizon t");
    sub_exa->add_option("-o,--out", exa.out, "output path (default stdout)");
    sub_exa->add_option("--config", exa.config,
                        "flat key=value config file (command-line values win)");

    BoundsArgs bnd;
    auto* sub_bnd = app.add_subcommand("bounds", "evaluate closed-form bound rows");
    sub_bnd->add_option("--graph", bnd.graph, "edge-list file")->required();
    sub_bnd->add_flag("--simple", bnd.simple, "use the simple (non-lazy) walk");
    sub_bnd->add_option("--trials", bnd.trials, "Monte Carlo budget")
        ->check(CLI::PositiveNumber);
    sub_bnd->add_option("--seed", bnd.seed, "master seed");
    sub_bnd->add_option("--workers", bnd.workers, "worker threads")
        ->check(CLI::PositiveNumber);
    sub_bnd->add_option("--product-cap", bnd.product_cap, "max product-chain states");
    sub_bnd->add_option("--format", bnd.format, "json|csv");
    sub_bnd->add_option("-o,--out", bnd.out, "output path (default stdout)");
    sub_bnd->add_option("--config", bnd.config,
                        "flat key=value config file (command-line values win)");

    ReplayArgs rep;
    auto* sub_rep = app.add_subcommand("replay", "re-run a recorded manifest");
    sub_rep->add_option("manifest", rep.manifest_path, "file containing a run manifest")
        ->required();
    sub_rep->add_option("-o,--out", rep.out_override, "redirect the replayed output");

    int exit_code = 0;
    sub_gen->callback([&] {
        apply_config_file(sub_gen, gen.config);
        exit_code = cmd_generate(gen);
    });
    sub_ana->callback([&] {
        apply_config_file(sub_ana, ana.config);
        exit_code = cmd_analyze(ana);
    });
    sub_sim->callback([&] {
        apply_config_file(sub_sim, sim.config);
        exit_code = cmd_simulate(sim);
    });
    sub_exa->callback([&] {
        apply_config_file(sub_exa, exa.config);
        exit_code = cmd_exact(exa);
    });
    sub_bnd->callback([&] {
        apply_config_file(sub_bnd, bnd.config);
        exit_code = cmd_bounds(bnd);
    });
    sub_rep->callback([&] { exit_code = cmd_replay(rep); });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("coalesce");
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    try {
        return run_cli(args);
    } catch (const coalesce::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
