#include "frdw/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "frdw/agent.hpp"
#include "frdw/predictor.hpp"

namespace frdw {

std::string_view to_string(PredictorKind k) { return k == PredictorKind::oracle ? "oracle" : "cv"; }

PredictorKind predictor_from_string(std::string_view s) {
    if (s == "oracle") return PredictorKind::oracle;
    if (s == "cv") return PredictorKind::cv;
    throw std::invalid_argument("unknown predictor '" + std::string(s) + "' (expected oracle|cv)");
}

double default_mu(ControllerKind k) {
    switch (k) {
        case ControllerKind::f_s2c: return 0.5;
        case ControllerKind::f_tapf: return 0.7;
        case ControllerKind::f_arc: return 0.5;
        default: return 0.0;
    }
}

double TrialConfig::resolved_mu() const {
    if (!is_future_variant(controller)) return 0.0;
    return mu.value_or(default_mu(controller));
}

void TrialConfig::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
    if (mu && !(*mu >= 0.0 && *mu <= 1.0)) fail("mu must be in [0, 1]");
    if (!(f_t > 0.0)) fail("f_t must be > 0");
    if (!(distance_budget > 0.0)) fail("distance_budget must be > 0");
    if (!(frame_rate > 0.0)) fail("frame_rate must be > 0");
    if (!(max_sim_time > 0.0)) fail("max_sim_time must be > 0");
    if (!(user.body_radius > 0.0)) fail("user.body_radius must be > 0");
    if (!(user.linear_speed > 0.0)) fail("user.linear_speed must be > 0");
    if (!(user.angular_speed > 0.0)) fail("user.angular_speed must be > 0");
    if (!(noise.mde_mean >= 0.0)) fail("mde_mean must be >= 0");
    if (!(noise.mde_sd >= 0.0)) fail("mde_sd must be >= 0");
    if (!(dir_accuracy > 1.0 / 3.0 && dir_accuracy <= 1.0)) fail("dir_accuracy must be in (1/3, 1]");
    if (!(dir_confidence >= 1.0 / 3.0 && dir_confidence <= 1.0)) fail("dir_confidence must be in [1/3, 1]");
    if (!(prediction_cooldown >= 0.0)) fail("prediction_cooldown must be >= 0");
    if (!(noise_hold >= 0.0)) fail("noise_hold must be >= 0");
    if (controller_params.mpc_depth < 1) fail("mpc_depth must be >= 1");
    if (!(controller_params.mpc_alpha >= 0.0)) fail("mpc_alpha must be >= 0");
}

std::string flags_to_string(unsigned f) {
    static constexpr std::pair<unsigned, const char*> names[] = {
        {flags::no_reset, "no_reset"},
        {flags::unrecoverable, "unrecoverable"},
        {flags::time_limit, "time_limit"},
        {flags::clamp_violation, "clamp_violation"},
        {flags::target_failure, "target_failure"},
    };
    std::string out;
    for (const auto& [bit, name] : names) {
        if (!(f & bit)) continue;
        if (!out.empty()) out += '|';
        out += name;
    }
    return out;
}

double compute_mdbr(const std::vector<ResetEvent>& resets, double total, bool* no_reset) {
    if (no_reset) *no_reset = resets.empty();
    if (resets.empty()) return total;
    // Deltas telescope, so their mean is the last reset's distance over the count.
    return resets.back().virtual_distance_at_event / static_cast<double>(resets.size());
}

namespace {

Vec2 sample_free_point(Rng& rng, const SpaceMap& space, double clearance) {
    const Vec2 lo = space.bbox_min(), hi = space.bbox_max();
    for (int i = 0; i < 100'000; ++i) {
        const Vec2 p{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        if (space.min_clearance(p) >= clearance) return p;
    }
    throw GenerationError("no free start position");
}

struct World {
    SpaceMap physical;
    SpaceMap virtual_space;
    PathPlanner planner;
    UserState user;
};

World build_world(const TrialConfig& cfg) {
    Rng scene_rng(cfg.seed, RngStream::scene);
    SpaceMap vspace = generate_virtual_space(scene_rng, cfg.scene);
    SpaceMap pspace = build_physical_space(cfg.experiment);
    PathPlanner planner(vspace, cfg.user.body_radius);

    Rng pose_rng(cfg.seed, RngStream::poses);
    const double need = cfg.user.body_radius + cfg.start_clearance;
    Vec2 vstart;
    for (int i = 0;; ++i) {
        if (i == 1000) throw GenerationError("no connected virtual start position");
        vstart = sample_free_point(pose_rng, vspace, need);
        // A second free point lands in the main component with high probability.
        const Vec2 probe = sample_free_point(pose_rng, vspace, need);
        if (planner.reachable(vstart, probe)) break;
    }
    UserState u;
    u.body_radius = cfg.user.body_radius;
    u.virtual_pose = {vstart, wrap_angle(pose_rng.uniform(-kPi, kPi))};
    u.physical_pose = {sample_free_point(pose_rng, pspace, need), wrap_angle(pose_rng.uniform(-kPi, kPi))};
    return {std::move(pspace), std::move(vspace), std::move(planner), u};
}

}  // namespace

EpisodeMetrics run_trial(const TrialConfig& cfg, const TrialHooks& hooks) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    World w = build_world(cfg);
    if (hooks.on_start) hooks.on_start(w.physical, w.virtual_space);

    Rng target_rng(cfg.seed, RngStream::targets);
    Rng predictor_rng(cfg.seed, RngStream::predictor);
    const ErrorMagnitude error(cfg.noise);
    const double dt = 1.0 / cfg.frame_rate;
    const double mu = cfg.resolved_mu();
    auto controller = make_controller(cfg.controller, cfg.controller_params);
    const bool uniform_gamma = cfg.dir_confidence <= 1.0 / 3.0 + 1e-12;

    EpisodeMetrics m;
    ResetLog log;
    UserState u = w.user;
    PlannedPath path;
    const ReachabilityFn reachable = [&](const Vec2& p) { return w.planner.reachable(u.virtual_pose.position, p); };
    auto next_target = [&] {
        const Target t = spawn_target(target_rng, u.virtual_pose.position, w.virtual_space, reachable, cfg.targets);
        path = w.planner.plan(u.virtual_pose.position, t.position);
    };

    double time = 0.0;
    double last_reset = -kInf;
    Vec2 held_error;
    double error_expires = -kInf;
    try {
        next_target();
        while (m.virtual_distance < cfg.distance_budget) {
            if (time >= cfg.max_sim_time) {
                m.flags |= flags::time_limit;
                break;
            }
            MotionCommand cmd = step_agent(path, u, cfg.user, dt, cfg.targets.collect_radius);
            if (cmd.target_reached) {
                ++m.targets_collected;
                next_target();
                cmd = step_agent(path, u, cfg.user, dt, cfg.targets.collect_radius);
            }
            u.linear_speed = cmd.dv / dt;
            u.angular_velocity = cmd.dtheta / dt;

            const bool predicting = time - last_reset >= cfg.prediction_cooldown;
            std::optional<Prediction> prediction;
            std::optional<DirectionProbs> gamma;
            if (predicting && controller->wants_position()) {
                if (cfg.predictor == PredictorKind::oracle) {
                    if (time >= error_expires) {
                        held_error = draw_error(error, predictor_rng);
                        error_expires = time + cfg.noise_hold - 1e-9;
                    }
                    prediction = predict_position_with_error(path, u, cfg.user, cfg.f_t, held_error, w.virtual_space);
                } else {
                    prediction = predict_position_cv(u, u.virtual_pose.forward() * u.linear_speed, cfg.f_t,
                                                     w.virtual_space);
                }
            }
            if (predicting && controller->wants_direction() && controller->deciding(time)) {
                gamma = uniform_gamma ? DirectionProbs::uniform()
                                      : predict_direction_probs(path, u, cfg.user, cfg.f_t, cfg.dir_accuracy,
                                                                predictor_rng, cfg.dir_confidence);
            }

            const ControllerFrame frame{u,   w.physical, w.virtual_space, prediction ? &*prediction : nullptr,
                                        gamma ? &*gamma : nullptr, mu, time};
            FrameRecord rec{time, u, controller->decide(frame), prediction.has_value(), false, {}, {}};
            if (prediction) rec.predicted_position = prediction->future_virtual_position;
            if (!within_limits(rec.decision.gains, cfg.controller_params.limits)) {
                ++m.clamp_violations;
                m.flags |= flags::clamp_violation;
            }

            const double before = w.physical.min_clearance(u.physical_pose.position);
            u = apply_redirection(u, cmd.dv, cmd.dtheta, rec.decision.gains, dt);
            m.virtual_distance += cmd.dv;
            time += dt;
            ++m.frames;

            if (cmd.dv > 0.0) {
                const double after = w.physical.min_clearance(u.physical_pose.position);
                if (after <= u.body_radius && after < before) {
                    auto [next, event] = execute_reset(u, w.physical, time, m.virtual_distance, cfg.reset);
                    u = next;
                    log.record(event);
                    last_reset = time;
                    rec.reset = true;
                    if (hooks.on_reset) hooks.on_reset(event);
                }
            }
            rec.physical_after = u.physical_pose.position;
            if (hooks.on_frame) hooks.on_frame(rec);
        }
    } catch (const UnrecoverablePoseError&) {
        m.flags |= flags::unrecoverable;
    } catch (const GenerationError&) {
        m.flags |= flags::target_failure;
    } catch (const PlanningError&) {
        m.flags |= flags::target_failure;
    }

    m.resets = log.count();
    bool none = false;
    m.mdbr = compute_mdbr(log.events(), m.virtual_distance, &none);
    if (none) m.flags |= flags::no_reset;
    m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return m;
}

TrialTrace record_trace(const TrialConfig& cfg, EpisodeMetrics* metrics) {
    std::optional<TrialTrace> trace;
    TrialHooks hooks;
    hooks.on_start = [&](const SpaceMap& p, const SpaceMap& v) { trace.emplace(TrialTrace{p, v, {}, {}}); };
    hooks.on_frame = [&](const FrameRecord& f) { trace->frames.push_back(f); };
    hooks.on_reset = [&](const ResetEvent& e) { trace->resets.push_back(e); };
    const EpisodeMetrics m = run_trial(cfg, hooks);
    if (metrics) *metrics = m;
    return std::move(*trace);
}

// ---- harness ----------------------------------------------------------------------

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::vector<MetricSummary> summarize(const std::vector<TrialRecord>& a, const std::vector<TrialRecord>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("summarize: arms differ in length");
    std::vector<MetricSummary> out;
    const std::pair<const char*, double (*)(const EpisodeMetrics&)> metrics[] = {
        {"resets", [](const EpisodeMetrics& m) { return static_cast<double>(m.resets); }},
        {"mdbr", [](const EpisodeMetrics& m) { return m.mdbr; }},
    };
    for (const auto& [name, get] : metrics) {
        std::vector<double> xa, xb;
        for (const auto& r : a) xa.push_back(get(r.metrics));
        for (const auto& r : b) xb.push_back(get(r.metrics));
        MetricSummary s;
        s.metric = name;
        s.n = a.size();
        s.a = mean_sd(xa);
        s.b = mean_sd(xb);
        s.t = paired_t_test(xa, xb);
        s.w = wilcoxon_signed_rank(xa, xb);
        out.push_back(std::move(s));
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    if (spec.trials < 2) throw std::invalid_argument("run_experiment: trials must be >= 2");
    ExperimentResult r;
    r.spec = spec;
    r.a.resize(spec.trials);
    r.b.resize(spec.trials);
    parallel_for(2 * spec.trials, spec.threads, [&](std::size_t job) {
        const std::size_t i = job / 2;
        TrialConfig cfg = spec.base;
        cfg.experiment = spec.experiment;
        cfg.controller = job % 2 == 0 ? spec.arm_a : spec.arm_b;
        cfg.seed = spec.base_seed + i;
        TrialRecord& slot = job % 2 == 0 ? r.a[i] : r.b[i];
        slot.config = cfg;
        slot.metrics = run_trial(cfg);
    });
    r.summaries = summarize(r.a, r.b);
    return r;
}

std::string_view to_string(SweepParam p) { return p == SweepParam::mu ? "mu" : "f_t"; }

SweepParam sweep_param_from_string(std::string_view s) {
    if (s == "mu") return SweepParam::mu;
    if (s == "f_t" || s == "ft") return SweepParam::f_t;
    throw std::invalid_argument("unknown sweep parameter '" + std::string(s) + "' (expected mu|f_t)");
}

std::vector<SweepPoint> sweep(SweepParam param, const std::vector<double>& grid, const ExperimentSpec& fixed) {
    if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
    std::vector<SweepPoint> out;
    for (double v : grid) {
        ExperimentSpec spec = fixed;
        if (param == SweepParam::mu)
            spec.base.mu = v;
        else
            spec.base.f_t = v;
        out.push_back({v, run_experiment(spec)});
    }
    return out;
}

namespace {

double parse_number(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw std::invalid_argument("bad number '" + std::string(s) + "' in grid");
    return v;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
    std::vector<std::string_view> parts;
    const char sep = text.find(':') != std::string_view::npos ? ':' : ',';
    for (std::size_t start = 0;;) {
        const std::size_t end = text.find(sep, start);
        parts.push_back(text.substr(start, end - start));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    std::vector<double> out;
    if (sep == ',') {
        for (auto p : parts) out.push_back(parse_number(p));
        return out;
    }
    if (parts.size() != 3) throw std::invalid_argument("range grid must be start:stop:step");
    const double lo = parse_number(parts[0]), hi = parse_number(parts[1]), step = parse_number(parts[2]);
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("range grid needs step > 0 and stop >= start");
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) {
        // Snap to the step's decimal grid so 0.1 * 3 prints as 0.3.
        out.push_back(std::round((lo + i * step) * 1e9) / 1e9);
    }
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string trial_csv_row(const TrialRecord& r) {
    const TrialConfig& c = r.config;
    const EpisodeMetrics& m = r.metrics;
    std::ostringstream os;
    os << to_string(c.experiment) << ',' << to_string(c.controller) << ',' << format_double(c.resolved_mu()) << ','
       << format_double(c.f_t) << ',' << c.seed << ',' << m.resets << ',' << format_double(m.virtual_distance) << ','
       << format_double(m.mdbr) << ',' << m.targets_collected << ',' << flags_to_string(m.flags);
    return os.str();
}

void write_trial_csv(std::ostream& os, const std::vector<const ExperimentResult*>& results) {
    os << kTrialCsvHeader << '\n';
    for (const ExperimentResult* r : results) {
        for (const auto& t : r->a) os << trial_csv_row(t) << '\n';
        for (const auto& t : r->b) os << trial_csv_row(t) << '\n';
    }
}

namespace {

void summary_fields(std::ostream& os, const ExperimentResult& r, const MetricSummary& s) {
    TrialConfig b = r.spec.base;
    b.controller = r.spec.arm_b;
    os << to_string(r.spec.experiment) << ',' << to_string(r.spec.arm_a) << ',' << to_string(r.spec.arm_b) << ','
       << format_double(b.resolved_mu()) << ',' << format_double(b.f_t) << ',' << s.metric << ','
       << format_double(s.a.mean) << ',' << format_double(s.a.sd) << ',' << format_double(s.b.mean) << ','
       << format_double(s.b.sd) << ',' << format_double(s.t.statistic) << ',' << format_double(s.t.p) << ','
       << format_double(s.w.statistic) << ',' << format_double(s.w.p) << ',' << s.n;
}

}  // namespace

void write_summary_csv(std::ostream& os, const std::vector<const ExperimentResult*>& results) {
    os << kSummaryCsvHeader << '\n';
    for (const ExperimentResult* r : results)
        for (const auto& s : r->summaries) {
            summary_fields(os, *r, s);
            os << '\n';
        }
}

void write_sweep_csv(std::ostream& os, SweepParam param, const std::vector<SweepPoint>& points) {
    os << kSweepCsvHeader << '\n';
    for (const auto& p : points)
        for (const auto& s : p.result.summaries) {
            os << to_string(param) << ',' << format_double(p.value) << ',';
            summary_fields(os, p.result, s);
            os << '\n';
        }
}

}  // namespace frdw
