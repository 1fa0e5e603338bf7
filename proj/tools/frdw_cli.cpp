// frdw: command-line driver for the redirected-walking experiments.
//
//   frdw run --experiment e1,e4 --pairs all --trials 100 --out results
//   frdw sweep --param mu --grid 0:1:0.1 --controller f-tapf --experiment e4
//   frdw render --experiment e4 --controller f-tapf --seed 3 --out e4.svg
//   frdw validate --config run.cfg
//
// Exit codes: 0 success, 1 config error, 2 runtime error.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "frdw/config.hpp"
#include "frdw/simulation.hpp"
#include "frdw/svg.hpp"

namespace fs = std::filesystem;
using namespace frdw;

namespace {

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

// Flags are kept as raw strings and routed through the same setters as the
// config file, so both report errors identically.
struct Flags {
    std::string config;
    std::optional<std::string> experiment, pairs, controller, predictor, mu, ft, trials, seed, out, threads;
    std::optional<std::string> param, grid;
    std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "key = value config file");
    cmd->add_option("--experiment", f.experiment, "e1..e4, comma list or all");
    cmd->add_option("--pairs,--pair", f.pairs, "controller pairs: all or a list such as tapf,arc");
    cmd->add_option("--controller", f.controller, "single controller");
    cmd->add_option("--predictor", f.predictor, "oracle|cv");
    cmd->add_option("--mu", f.mu, "blend weight for every future variant");
    cmd->add_option("--ft", f.ft, "prediction horizon, s");
    cmd->add_option("--trials", f.trials, "paired trials per experiment");
    cmd->add_option("--seed", f.seed, "base seed");
    cmd->add_option("--out", f.out, "output directory (render: SVG file)");
    cmd->add_option("--threads", f.threads, "worker threads, 0 = all cores");
    cmd->add_option("--set", f.sets, "extra key=value override, repeatable");
}

RunSpec resolve(const Flags& f) {
    RunSpec spec;
    if (!f.config.empty()) apply_config_file(spec, f.config);
    auto put = [&spec](const char* key, const std::optional<std::string>& v) {
        if (v) apply_setting(spec, key, *v);
    };
    put("experiment", f.experiment);
    put("pairs", f.pairs);
    put("controller", f.controller);
    put("predictor", f.predictor);
    put("mu", f.mu);
    put("f_t", f.ft);
    put("trials", f.trials);
    put("seed", f.seed);
    put("out", f.out);
    put("threads", f.threads);
    put("sweep.param", f.param);
    put("sweep.grid", f.grid);
    for (const std::string& kv : f.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set: expected key=value, got '" + kv + "'");
        apply_setting(spec, kv.substr(0, eq), kv.substr(eq + 1));
    }
    // --controller alone selects its pair for `run`.
    if (spec.controller && !f.pairs) spec.pairs = {future_of(*spec.controller)};
    spec.validate();
    return spec;
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_run(const RunSpec& spec) {
    std::vector<ExperimentResult> results;
    results.reserve(spec.experiments.size() * spec.pairs.size());
    for (Experiment e : spec.experiments)
        for (ControllerKind k : spec.pairs) {
            const auto t0 = std::chrono::steady_clock::now();
            results.push_back(run_experiment(spec.experiment_spec(e, k)));
            const auto& r = results.back();
            const auto& s = r.summaries.front();
            std::cerr << to_string(e) << ' ' << to_string(r.spec.arm_a) << " vs " << to_string(r.spec.arm_b)
                      << ": resets " << format_double(s.a.mean) << " -> " << format_double(s.b.mean)
                      << " (p_w " << format_double(s.w.p) << ", " << format_double(seconds_since(t0)) << " s)\n";
        }
    std::vector<const ExperimentResult*> ptrs;
    for (const auto& r : results) ptrs.push_back(&r);
    std::ostringstream trials, summary;
    write_trial_csv(trials, ptrs);
    write_summary_csv(summary, ptrs);
    write_file(spec.out / "trials.csv", trials.str());
    write_file(spec.out / "summary.csv", summary.str());
    std::cerr << "wrote " << (spec.out / "trials.csv").string() << " and " << (spec.out / "summary.csv").string() << '\n';
    return 0;
}

int cmd_sweep(const RunSpec& spec) {
    if (spec.sweep_grid.empty()) throw ConfigError("sweep.grid: required for sweep (e.g. --grid 0:1:0.1)");
    const ControllerKind k = spec.controller ? future_of(*spec.controller) : spec.pairs.front();
    std::vector<SweepPoint> all;
    for (Experiment e : spec.experiments) {
        auto points = sweep(spec.sweep_param, spec.sweep_grid, spec.experiment_spec(e, k));
        for (auto& p : points) {
            std::cerr << to_string(e) << ' ' << to_string(spec.sweep_param) << '=' << format_double(p.value)
                      << ": resets " << format_double(p.result.summaries.front().b.mean) << '\n';
            all.push_back(std::move(p));
        }
    }
    std::ostringstream os;
    write_sweep_csv(os, spec.sweep_param, all);
    write_file(spec.out / "sweep.csv", os.str());
    std::cerr << "wrote " << (spec.out / "sweep.csv").string() << '\n';
    return 0;
}

int cmd_render(const RunSpec& spec) {
    TrialConfig cfg = spec.base;
    cfg.experiment = spec.experiments.front();
    cfg.controller = spec.controller ? *spec.controller : spec.pairs.front();
    cfg.mu = spec.mu_for(cfg.controller);
    cfg.seed = spec.seed;
    EpisodeMetrics m;
    const TrialTrace trace = record_trace(cfg, &m);
    fs::path path = spec.out;
    if (path.extension() != ".svg") path /= std::string(to_string(cfg.experiment)) + "_" +
                                            std::string(to_string(cfg.controller)) + "_" + std::to_string(cfg.seed) +
                                            ".svg";
    write_file(path, render_trajectory_svg(trace));
    std::cerr << "resets " << m.resets << ", mdbr " << format_double(m.mdbr) << "; wrote " << path.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Future-position-aware redirected walking simulator"};
    app.require_subcommand(1);
    Flags f;
    auto* run = app.add_subcommand("run", "run paired experiments and write trials.csv and summary.csv");
    auto* sw = app.add_subcommand("sweep", "sweep mu or f_t and write sweep.csv");
    auto* render = app.add_subcommand("render", "replay one seed and write an SVG trajectory");
    auto* validate = app.add_subcommand("validate", "check a config without running");
    auto* keys = app.add_subcommand("keys", "list config keys with defaults");
    for (auto* c : {run, sw, render, validate}) add_common(c, f);
    sw->add_option("--param", f.param, "mu|f_t");
    sw->add_option("--grid", f.grid, "a:b:step or comma list");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    if (keys->parsed()) {
        for (const auto& k : config_keys())
            std::cout << k.key << " = " << k.default_value << (k.description.empty() ? "" : "  # " + k.description)
                      << '\n';
        return 0;
    }

    RunSpec spec;
    try {
        spec = resolve(f);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    try {
        if (validate->parsed()) {
            std::cout << "ok\n";
            return 0;
        }
        if (run->parsed()) return cmd_run(spec);
        if (sw->parsed()) return cmd_sweep(spec);
        if (render->parsed()) return cmd_render(spec);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return 0;
}
