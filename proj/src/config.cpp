#include "frdw/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace frdw {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void fail(std::string_view key, const std::string& what) {
    throw ConfigError(std::string(key) + ": " + what);
}

double parse_double(std::string_view key, std::string_view v) {
    v = trim(v);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
        fail(key, "expected a number, got '" + std::string(v) + "'");
    return out;
}

long long parse_int(std::string_view key, std::string_view v) {
    v = trim(v);
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
        fail(key, "expected an integer, got '" + std::string(v) + "'");
    return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
    v = trim(v);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(key, "expected true|false, got '" + std::string(v) + "'");
}

// Range checks name the bound in the message so the user can fix the value
// without reading the source.
struct Range {
    double lo;
    double hi;
    bool lo_open = false;
    bool hi_open = false;

    bool contains(double x) const {
        const bool above = lo_open ? x > lo : x >= lo;
        const bool below = hi_open ? x < hi : x <= hi;
        return above && below;
    }
    std::string describe() const {
        auto bound = [](double b) {
            if (std::isinf(b)) return std::string(b > 0 ? "inf" : "-inf");
            return format_double(b);
        };
        return std::string(lo_open ? "(" : "[") + bound(lo) + ", " + bound(hi) + (hi_open ? ")" : "]");
    }
};

constexpr double kBig = std::numeric_limits<double>::infinity();
constexpr Range kPositive{0.0, kBig, true, true};
constexpr Range kNonNegative{0.0, kBig, false, true};
constexpr Range kUnit{0.0, 1.0};

double checked(std::string_view key, std::string_view v, Range r) {
    const double x = parse_double(key, v);
    if (!r.contains(x)) fail(key, "value " + format_double(x) + " out of range " + r.describe());
    return x;
}

long long checked_int(std::string_view key, std::string_view v, long long lo, long long hi) {
    const long long x = parse_int(key, v);
    if (x < lo || x > hi)
        fail(key, "value " + std::to_string(x) + " out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
}

using Setter = std::function<void(RunSpec&, std::string_view key, std::string_view value)>;

struct KeyDef {
    KeyInfo info;
    Setter set;
};

Setter real(double TrialConfig::*field, Range r) {
    return [field, r](RunSpec& s, std::string_view k, std::string_view v) { s.base.*field = checked(k, v, r); };
}

template <class Get>
Setter real_at(Get get, Range r) {
    return [get, r](RunSpec& s, std::string_view k, std::string_view v) { get(s) = checked(k, v, r); };
}

template <class Get>
Setter int_at(Get get, long long lo, long long hi) {
    return [get, lo, hi](RunSpec& s, std::string_view k, std::string_view v) {
        get(s) = static_cast<std::remove_reference_t<decltype(get(s))>>(checked_int(k, v, lo, hi));
    };
}

const std::vector<KeyDef>& key_table() {
    static const std::vector<KeyDef> table = [] {
        std::vector<KeyDef> t;
        auto add = [&t](std::string key, std::string def, std::string desc, Setter set) {
            t.push_back({{std::move(key), std::move(def), std::move(desc)}, std::move(set)});
        };
        using S = RunSpec;

        add("experiment", "e1,e2,e3,e4", "physical spaces to run", [](S& s, auto k, auto v) {
            try {
                s.experiments = parse_experiments(v);
            } catch (const std::invalid_argument& e) {
                fail(k, e.what());
            }
        });
        add("pairs", "all", "controller pairs (all or a list such as tapf,arc)", [](S& s, auto k, auto v) {
            try {
                s.pairs = parse_pairs(v);
            } catch (const std::invalid_argument& e) {
                fail(k, e.what());
            }
        });
        add("controller", "", "single controller for render and sweep", [](S& s, auto k, auto v) {
            try {
                s.controller = controller_from_string(trim(v));
            } catch (const std::invalid_argument& e) {
                fail(k, e.what());
            }
        });
        add("trials", "100", "paired trials per experiment", int_at([](S& s) -> std::size_t& { return s.trials; }, 2, 1'000'000));
        add("seed", "1", "base seed; trial i uses seed + i", [](S& s, auto k, auto v) {
            const long long x = parse_int(k, v);
            if (x < 0) fail(k, "expected a non-negative integer");
            s.seed = static_cast<std::uint64_t>(x);
        });
        add("threads", "0", "worker threads (0: all cores)", int_at([](S& s) -> unsigned& { return s.threads; }, 0, 1024));
        add("out", "results", "output directory", [](S& s, auto k, auto v) {
            if (trim(v).empty()) fail(k, "expected a path");
            s.out = std::string(trim(v));
        });
        add("predictor", "oracle", "oracle|cv", [](S& s, auto k, auto v) {
            try {
                s.base.predictor = predictor_from_string(trim(v));
            } catch (const std::invalid_argument& e) {
                fail(k, e.what());
            }
        });
        add("mu", "", "blend weight for every future variant, [0, 1]",
            [](S& s, auto k, auto v) { s.mu_all = checked(k, v, kUnit); });
        for (ControllerKind c : {ControllerKind::f_s2c, ControllerKind::f_tapf, ControllerKind::f_arc}) {
            add("mu." + std::string(to_string(c)), format_double(default_mu(c)), "blend weight for " + std::string(to_string(c)),
                [c](S& s, auto k, auto v) { s.mu_by[c] = checked(k, v, kUnit); });
        }
        add("f_t", "1", "prediction horizon, s", real(&TrialConfig::f_t, kPositive));
        add("mde_mean", "0.45", "mean displacement error of the oracle, m",
            real_at([](S& s) -> double& { return s.base.noise.mde_mean; }, kNonNegative));
        add("mde_sd", "0.35", "SD of the displacement error, m",
            real_at([](S& s) -> double& { return s.base.noise.mde_sd; }, kNonNegative));
        add("dir_accuracy", "0.77", "direction classifier accuracy, (1/3, 1]",
            real(&TrialConfig::dir_accuracy, {1.0 / 3.0, 1.0, true, false}));
        add("dir_confidence", "0.77", "probability on the reported direction class, [1/3, 1]",
            real(&TrialConfig::dir_confidence, {1.0 / 3.0, 1.0}));
        add("noise_hold", "0", "seconds an oracle error draw is kept", real(&TrialConfig::noise_hold, kNonNegative));
        add("prediction_cooldown", "0.5", "seconds without prediction after a reset",
            real(&TrialConfig::prediction_cooldown, kNonNegative));

        add("sim.frame_rate", "60", "simulation rate, Hz", real(&TrialConfig::frame_rate, kPositive));
        add("sim.distance_budget", "100", "virtual distance per episode, m", real(&TrialConfig::distance_budget, kPositive));
        add("sim.max_time", "3600", "safety stop per episode, s", real(&TrialConfig::max_sim_time, kPositive));
        add("sim.start_clearance", "0.1", "extra clearance of the initial poses, m",
            real(&TrialConfig::start_clearance, kNonNegative));

        add("user.body_radius", "0.5", "m", real_at([](S& s) -> double& { return s.base.user.body_radius; }, kPositive));
        add("user.linear_speed", "1", "m/s", real_at([](S& s) -> double& { return s.base.user.linear_speed; }, kPositive));
        add("user.angular_speed", "1.5707963267948966", "rad/s",
            real_at([](S& s) -> double& { return s.base.user.angular_speed; }, kPositive));

        auto lim = [](S& s) -> GainLimits& { return s.base.controller_params.limits; };
        add("gains.gt_min", "0.86", "translation gain lower bound",
            real_at([lim](S& s) -> double& { return lim(s).gt_min; }, kPositive));
        add("gains.gt_max", "1.26", "translation gain upper bound",
            real_at([lim](S& s) -> double& { return lim(s).gt_max; }, kPositive));
        add("gains.gr_min", "0.67", "rotation gain lower bound",
            real_at([lim](S& s) -> double& { return lim(s).gr_min; }, kPositive));
        add("gains.gr_max", "1.24", "rotation gain upper bound",
            real_at([lim](S& s) -> double& { return lim(s).gr_max; }, kPositive));
        add("gains.min_curvature_radius", "7.5", "m",
            real_at([lim](S& s) -> double& { return lim(s).min_curvature_radius; }, kPositive));

        auto cp = [](S& s) -> ControllerParams& { return s.base.controller_params; };
        add("steer.dead_zone_deg", "2", "heading error below which S2C does not bend, degrees", [cp](S& s, auto k, auto v) {
            cp(s).dead_zone = checked(k, v, {0.0, 180.0}) * kPi / 180.0;
        });
        add("tapf.spacing", "0.25", "boundary sample spacing for the force field, m",
            real_at([cp](S& s) -> double& { return cp(s).tapf_spacing; }, kPositive));
        add("arc.range", "10", "misalignment raycast range, m",
            real_at([cp](S& s) -> double& { return cp(s).arc_range; }, kPositive));
        add("arc.saturation", "0.5", "misalignment at which curvature saturates, m",
            real_at([cp](S& s) -> double& { return cp(s).arc_saturation; }, kPositive));
        add("arc.distance_floor", "0.1", "floor on front distances in the g_t ratio, m",
            real_at([cp](S& s) -> double& { return cp(s).arc_distance_floor; }, kPositive));
        add("arc.future_orientation_reversed", "false", "use current minus future for the future orientation",
            [cp](S& s, auto k, auto v) { cp(s).arc_future_orientation_from_algorithm = parse_bool(k, v); });
        add("mpc_depth", "4", "lookahead stages", int_at([cp](S& s) -> int& { return cp(s).mpc_depth; }, 1, 8));
        add("mpc_alpha", "0.8", "discount per stage", real_at([cp](S& s) -> double& { return cp(s).mpc_alpha; }, kUnit));
        add("mpc.segment_length", "1", "walk per stage, m",
            real_at([cp](S& s) -> double& { return cp(s).mpc_segment_length; }, kPositive));
        add("mpc.sample_step", "0.25", "collision sampling step, m",
            real_at([cp](S& s) -> double& { return cp(s).mpc_sample_step; }, kPositive));
        add("mpc.reset_cost", "1000", "", real_at([cp](S& s) -> double& { return cp(s).mpc_reset_cost; }, kNonNegative));
        add("mpc.action_cost", "0.1", "cost of a curvature action",
            real_at([cp](S& s) -> double& { return cp(s).mpc_action_cost; }, kNonNegative));
        add("mpc.proximity_range", "1", "wall distance below which proximity is penalized, m",
            real_at([cp](S& s) -> double& { return cp(s).mpc_proximity_range; }, kPositive));
        add("mpc.replan_interval", "0.5", "s", real_at([cp](S& s) -> double& { return cp(s).mpc_replan_interval; }, kPositive));

        add("reset.blocked_range", "1", "free distance under which the center direction is blocked, m",
            real_at([](S& s) -> double& { return s.base.reset.blocked_range; }, kNonNegative));
        add("reset.directions", "72", "candidate headings when the center is blocked",
            int_at([](S& s) -> int& { return s.base.reset.directions; }, 4, 3600));

        add("targets.min_distance", "0.2", "m", real_at([](S& s) -> double& { return s.base.targets.min_distance; }, kNonNegative));
        add("targets.max_distance", "8", "m", real_at([](S& s) -> double& { return s.base.targets.max_distance; }, kPositive));
        add("targets.min_clearance", "0.3", "m",
            real_at([](S& s) -> double& { return s.base.targets.min_clearance; }, kNonNegative));
        add("targets.collect_radius", "0.2", "m",
            real_at([](S& s) -> double& { return s.base.targets.collect_radius; }, kPositive));

        add("scene.half_extent", "10", "virtual space half size, m",
            real_at([](S& s) -> double& { return s.base.scene.half_extent; }, kPositive));
        add("scene.min_walls", "10", "", int_at([](S& s) -> int& { return s.base.scene.min_walls; }, 0, 1000));
        add("scene.max_walls", "15", "", int_at([](S& s) -> int& { return s.base.scene.max_walls; }, 0, 1000));
        add("scene.wall_length", "4", "m", real_at([](S& s) -> double& { return s.base.scene.wall_length; }, kPositive));

        add("sweep.param", "mu", "mu|f_t", [](S& s, auto k, auto v) {
            try {
                s.sweep_param = sweep_param_from_string(trim(v));
            } catch (const std::invalid_argument& e) {
                fail(k, e.what());
            }
        });
        add("sweep.grid", "", "a:b:step or a comma list", [](S& s, auto k, auto v) {
            try {
                s.sweep_grid = parse_grid(trim(v));
            } catch (const std::invalid_argument& e) {
                fail(k, e.what());
            }
        });
        return t;
    }();
    return table;
}

}  // namespace

double RunSpec::mu_for(ControllerKind k) const {
    if (!is_future_variant(k)) return 0.0;
    if (auto it = mu_by.find(k); it != mu_by.end()) return it->second;
    if (mu_all) return *mu_all;
    return default_mu(k);
}

ExperimentSpec RunSpec::experiment_spec(Experiment e, ControllerKind future_kind) const {
    ExperimentSpec spec;
    spec.experiment = e;
    spec.arm_a = vanilla_of(future_kind);
    spec.arm_b = future_of(future_kind);
    spec.trials = trials;
    spec.base_seed = seed;
    spec.threads = threads;
    spec.base = base;
    spec.base.experiment = e;
    spec.base.mu = mu_for(spec.arm_b);
    return spec;
}

void RunSpec::validate() const {
    if (experiments.empty()) throw ConfigError("experiment: at least one experiment required");
    if (pairs.empty()) throw ConfigError("pairs: at least one pair required");
    const auto& l = base.controller_params.limits;
    if (!(l.gt_min <= 1.0 && 1.0 <= l.gt_max)) throw ConfigError("gains.gt_min/gt_max: range must contain 1");
    if (!(l.gr_min <= 1.0 && 1.0 <= l.gr_max)) throw ConfigError("gains.gr_min/gr_max: range must contain 1");
    if (base.targets.min_distance >= base.targets.max_distance)
        throw ConfigError("targets.min_distance: must be below targets.max_distance");
    if (base.scene.min_walls > base.scene.max_walls) throw ConfigError("scene.min_walls: must not exceed scene.max_walls");
    for (const auto& [k, v] : mu_by)
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("mu." + std::string(to_string(k)) + ": out of range [0, 1]");
    try {
        TrialConfig probe = base;
        for (ControllerKind k : pairs) {
            probe.controller = future_of(k);
            probe.mu = mu_for(probe.controller);
            probe.validate();
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

void apply_setting(RunSpec& spec, std::string_view key, std::string_view value) {
    key = trim(key);
    for (const auto& def : key_table()) {
        if (def.info.key == key) {
            def.set(spec, key, value);
            return;
        }
    }
    fail(key, "unknown key");
}

void apply_config_text(RunSpec& spec, std::string_view text, std::string_view origin) {
    std::size_t line_no = 0;
    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": expected 'key = value'");
        try {
            apply_setting(spec, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void apply_config_file(RunSpec& spec, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(spec, ss.str(), path.string());
}

const std::vector<KeyInfo>& config_keys() {
    static const std::vector<KeyInfo> keys = [] {
        std::vector<KeyInfo> out;
        for (const auto& d : key_table()) out.push_back(d.info);
        return out;
    }();
    return keys;
}

std::vector<Experiment> parse_experiments(std::string_view text) {
    std::vector<Experiment> out;
    if (trim(text) == "all") return {Experiment::e1, Experiment::e2, Experiment::e3, Experiment::e4};
    for (auto part : split(text, ',')) {
        if (part.empty()) continue;
        out.push_back(experiment_from_string(part));
    }
    if (out.empty()) throw std::invalid_argument("expected e1..e4 or a comma list");
    return out;
}

std::vector<ControllerKind> parse_pairs(std::string_view text) {
    if (trim(text) == "all")
        return {ControllerKind::f_mpcred, ControllerKind::f_s2c, ControllerKind::f_tapf, ControllerKind::f_arc};
    std::vector<ControllerKind> out;
    for (auto part : split(text, ',')) {
        if (part.empty()) continue;
        const ControllerKind k = future_of(controller_from_string(part));
        if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
    }
    if (out.empty()) throw std::invalid_argument("expected 'all' or a comma list of controllers");
    return out;
}

}  // namespace frdw
