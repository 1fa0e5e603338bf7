#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "frdw/config.hpp"
#include "frdw/environment.hpp"
#include "frdw/simulation.hpp"
#include "frdw/stats.hpp"
#include "frdw/svg.hpp"

namespace py = pybind11;
using namespace frdw;

namespace {

// Python callers pass overrides as {"key": value}; values go through the same
// setters as the config file.
RunSpec spec_from(const py::dict& settings) {
    RunSpec spec;
    for (const auto& [k, v] : settings) {
        std::string value = py::isinstance<py::bool_>(v) ? (v.cast<bool>() ? "true" : "false") : py::str(v).cast<std::string>();
        apply_setting(spec, k.cast<std::string>(), value);
    }
    spec.validate();
    return spec;
}

TrialConfig trial_from(const std::string& experiment, const std::string& controller, std::uint64_t seed,
                       const py::dict& settings) {
    const RunSpec spec = spec_from(settings);
    TrialConfig cfg = spec.base;
    cfg.experiment = experiment_from_string(experiment);
    cfg.controller = controller_from_string(controller);
    cfg.mu = spec.mu_for(cfg.controller);
    cfg.seed = seed;
    return cfg;
}

py::dict metrics_dict(const EpisodeMetrics& m) {
    py::dict d;
    d["resets"] = m.resets;
    d["virtual_distance"] = m.virtual_distance;
    d["mdbr"] = m.mdbr;
    d["targets"] = m.targets_collected;
    d["frames"] = m.frames;
    d["clamp_violations"] = m.clamp_violations;
    d["flags"] = flags_to_string(m.flags);
    return d;
}

py::dict test_dict(const TestResult& r) {
    py::dict d;
    d["statistic"] = r.statistic;
    d["p"] = r.p;
    d["degenerate"] = r.degenerate;
    d["n"] = r.n;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Future-position-aware redirected walking simulator";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def(
        "physical_space",
        [](const std::string& experiment) {
            const SpaceMap s = build_physical_space(experiment_from_string(experiment));
            py::dict d;
            auto pts = [](const Polygon& p) {
                std::vector<std::pair<double, double>> out;
                for (const Vec2& v : p.vertices()) out.emplace_back(v.x, v.y);
                return out;
            };
            d["boundary"] = pts(s.boundary());
            std::vector<std::vector<std::pair<double, double>>> obs;
            for (const Polygon& o : s.obstacles()) obs.push_back(pts(o));
            d["obstacles"] = obs;
            return d;
        },
        py::arg("experiment"));

    m.def(
        "clearance",
        [](const std::string& experiment, double x, double y) {
            return build_physical_space(experiment_from_string(experiment)).min_clearance(Vec2::make(x, y));
        },
        py::arg("experiment"), py::arg("x"), py::arg("y"));

    m.def(
        "raycast",
        [](const std::string& experiment, double x, double y, double heading, double max_range) {
            return build_physical_space(experiment_from_string(experiment))
                .raycast(Vec2::make(x, y), Vec2::from_angle(heading), max_range);
        },
        py::arg("experiment"), py::arg("x"), py::arg("y"), py::arg("heading"), py::arg("max_range") = 100.0);

    m.def(
        "run_trial",
        [](const std::string& experiment, const std::string& controller, std::uint64_t seed, const py::dict& settings) {
            const TrialConfig cfg = trial_from(experiment, controller, seed, settings);
            EpisodeMetrics metrics;
            {
                py::gil_scoped_release release;
                metrics = run_trial(cfg);
            }
            return metrics_dict(metrics);
        },
        py::arg("experiment"), py::arg("controller"), py::arg("seed"), py::arg("settings") = py::dict());

    m.def(
        "run_experiment",
        [](const std::string& experiment, const std::string& pair, const py::dict& settings) {
            const RunSpec spec = spec_from(settings);
            const ExperimentSpec es =
                spec.experiment_spec(experiment_from_string(experiment), future_of(controller_from_string(pair)));
            ExperimentResult r;
            {
                py::gil_scoped_release release;
                r = run_experiment(es);
            }
            std::ostringstream trials, summary;
            write_trial_csv(trials, {&r});
            write_summary_csv(summary, {&r});
            py::dict d;
            d["trials_csv"] = trials.str();
            d["summary_csv"] = summary.str();
            return d;
        },
        py::arg("experiment"), py::arg("pair"), py::arg("settings") = py::dict());

    m.def(
        "render_svg",
        [](const std::string& experiment, const std::string& controller, std::uint64_t seed, const py::dict& settings) {
            const TrialConfig cfg = trial_from(experiment, controller, seed, settings);
            return render_trajectory_svg(record_trace(cfg));
        },
        py::arg("experiment"), py::arg("controller"), py::arg("seed"), py::arg("settings") = py::dict());

    m.def(
        "paired_t_test",
        [](const std::vector<double>& a, const std::vector<double>& b) { return test_dict(paired_t_test(a, b)); },
        py::arg("a"), py::arg("b"));
    m.def(
        "wilcoxon_signed_rank",
        [](const std::vector<double>& a, const std::vector<double>& b) { return test_dict(wilcoxon_signed_rank(a, b)); },
        py::arg("a"), py::arg("b"));

    m.def(
        "compute_mdbr",
        [](const std::vector<double>& reset_distances, double total) {
            std::vector<ResetEvent> events;
            for (double d : reset_distances) events.push_back({0.0, {}, d});
            bool no_reset = false;
            const double v = compute_mdbr(events, total, &no_reset);
            return py::make_tuple(v, no_reset);
        },
        py::arg("reset_distances"), py::arg("total"));

    m.def("config_keys", [] {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& k : config_keys()) out.emplace_back(k.key, k.default_value);
        return out;
    });

    m.attr("TRIAL_CSV_HEADER") = kTrialCsvHeader;
    m.attr("SUMMARY_CSV_HEADER") = kSummaryCsvHeader;
    m.attr("SWEEP_CSV_HEADER") = kSweepCsvHeader;
}
