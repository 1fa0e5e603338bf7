// Acceptance suite: one PASS/FAIL line per primary criterion.
//
// Usage: frdw_acceptance [output_dir]
// Writes trials.csv and summary.csv of the E1-E4 grid into output_dir
// (default: acceptance_out). Exit status is 0 once every criterion has been
// evaluated; criterion failures are reported on stdout, not via the exit code.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "frdw/agent.hpp"
#include "frdw/simulation.hpp"
#include "oracles.hpp"

using namespace frdw;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int g_pass = 0;
int g_fail = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
    (ok ? g_pass : g_fail)++;
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
}

std::string fmt(double v, int digits = 3) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

std::string pfmt(double p) {
    if (p < 1e-4) return "<1e-4";
    return fmt(p, 4);
}

// Every trial run by the suite contributes to the clamp invariant.
std::size_t g_trials = 0;
std::size_t g_clamp_violations = 0;
std::size_t g_flagged_abnormal = 0;

void tally(const std::vector<TrialRecord>& rs) {
    for (const auto& r : rs) {
        ++g_trials;
        g_clamp_violations += r.metrics.clamp_violations;
        if (r.metrics.flags & (flags::unrecoverable | flags::time_limit | flags::target_failure)) ++g_flagged_abnormal;
    }
}

void tally(const EpisodeMetrics& m) {
    ++g_trials;
    g_clamp_violations += m.clamp_violations;
}

constexpr std::size_t kTrials = 100;
constexpr std::uint64_t kBaseSeed = 1;

const ControllerKind kPairs[] = {ControllerKind::f_s2c, ControllerKind::f_tapf, ControllerKind::f_arc,
                                 ControllerKind::f_mpcred};

ExperimentSpec spec_for(Experiment e, ControllerKind f, std::size_t trials = kTrials) {
    ExperimentSpec s;
    s.experiment = e;
    s.arm_a = vanilla_of(f);
    s.arm_b = f;
    s.trials = trials;
    s.base_seed = kBaseSeed;
    s.base.mu = default_mu(f);
    return s;
}

const MetricSummary& metric(const ExperimentResult& r, const std::string& name) {
    for (const auto& s : r.summaries)
        if (s.metric == name) return s;
    throw std::logic_error("missing metric " + name);
}

std::string pair_line(const ExperimentResult& r) {
    const auto& res = metric(r, "resets");
    const auto& md = metric(r, "mdbr");
    return std::string(to_string(r.spec.arm_b)) + " resets " + fmt(res.a.mean, 2) + "->" + fmt(res.b.mean, 2) +
           " (z " + fmt(res.w.statistic, 2) + ", p " + pfmt(res.w.p) + "), mdbr " + fmt(md.a.mean, 2) + "->" +
           fmt(md.b.mean, 2) + " (z " + fmt(md.w.statistic, 2) + ", p " + pfmt(md.w.p) + ")";
}

// Trial CSV row without the controller and mu columns, which legitimately differ.
std::string outcome_fields(const TrialRecord& r) {
    const std::string row = trial_csv_row(r);
    std::vector<std::string> cols;
    std::stringstream ss(row);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i == 1 || i == 2) continue;
        out += cols[i] + ",";
    }
    return out;
}

// ---- criteria ---------------------------------------------------------------------------

void reduction_exactness() {
    const auto t0 = Clock::now();
    const Experiment envs[] = {Experiment::e1, Experiment::e2, Experiment::e3, Experiment::e4};
    int mismatched = 0, arc_frame_mismatch = 0;
    std::size_t arc_frames = 0;
    std::mutex mu;
    parallel_for(20, 0, [&](std::size_t i) {
        const std::uint64_t seed = 1000 + 37 * i;
        TrialConfig base;
        base.experiment = envs[i % 4];
        base.seed = seed;
        int local_mismatch = 0;
        auto compare = [&](ControllerKind vanilla, ControllerKind future, auto tweak) {
            TrialConfig a = base, b = base;
            a.controller = vanilla;
            b.controller = future;
            tweak(b);
            const TrialRecord ra{a, run_trial(a)}, rb{b, run_trial(b)};
            if (outcome_fields(ra) != outcome_fields(rb)) ++local_mismatch;
            std::lock_guard lock(mu);
            tally(ra.metrics);
            tally(rb.metrics);
        };
        compare(ControllerKind::s2c, ControllerKind::f_s2c, [](TrialConfig& c) { c.mu = 0.0; });
        compare(ControllerKind::tapf, ControllerKind::f_tapf, [](TrialConfig& c) { c.mu = 0.0; });
        compare(ControllerKind::mpcred, ControllerKind::f_mpcred, [](TrialConfig& c) { c.dir_confidence = 1.0 / 3.0; });

        // g_r differs by design (F-ARC's future-branch rule vs ARC's ml trend), so
        // the physical paths drift apart. Both controllers are therefore scored
        // on the same recorded states: each frame of an ARC episode is re-decided
        // by F-ARC(mu=0), and each frame of an F-ARC(mu=0) episode by ARC.
        int frame_mismatch = 0;
        std::size_t n = 0;
        EpisodeMetrics ma, mb;
        for (ControllerKind k : {ControllerKind::arc, ControllerKind::f_arc}) {
            TrialConfig c = base;
            c.controller = k;
            c.mu = 0.0;
            const SpaceMap* phys = nullptr;
            const SpaceMap* virt = nullptr;
            TrialHooks h;
            h.on_start = [&](const SpaceMap& p, const SpaceMap& v) {
                phys = &p;
                virt = &v;
            };
            h.on_frame = [&](const FrameRecord& f) {
                const Prediction pred{f.predicted_position.value_or(f.user.virtual_pose.position), 1.0};
                const SteeringDecision other =
                    k == ControllerKind::arc ? f_arc(f.user, pred, FusionWeight(0.0), *virt, *phys)
                                             : arc(f.user, std::nullopt, *virt, *phys);
                const Gains& g = f.decision.gains;
                if (g.gt != other.gains.gt || g.curvature() != other.gains.curvature()) ++frame_mismatch;
                ++n;
            };
            (k == ControllerKind::arc ? ma : mb) = run_trial(c, h);
        }
        std::lock_guard lock(mu);
        mismatched += local_mismatch;
        arc_frame_mismatch += frame_mismatch;
        arc_frames += n;
        tally(ma);
        tally(mb);
    });
    const double secs = since(t0);
    report(mismatched == 0 && arc_frame_mismatch == 0 && secs < 120.0, "reduction exactness",
           "20 seeds: " + std::to_string(mismatched) + "/60 row mismatches (s2c, tapf, mpcred); f-arc mu=0 " +
               std::to_string(arc_frame_mismatch) + " g_t/g_c mismatches over " + std::to_string(arc_frames) +
               " frames; " + fmt(secs, 1) + " s");
}

struct Grid {
    std::map<std::pair<Experiment, ControllerKind>, ExperimentResult> results;
    std::map<Experiment, double> seconds;

    const ExperimentResult& at(Experiment e, ControllerKind k) const { return results.at({e, k}); }
};

Grid run_grid() {
    Grid g;
    for (Experiment e : {Experiment::e1, Experiment::e2, Experiment::e3, Experiment::e4}) {
        const auto t0 = Clock::now();
        for (ControllerKind k : kPairs) {
            ExperimentResult r = run_experiment(spec_for(e, k));
            tally(r.a);
            tally(r.b);
            std::cerr << "  " << to_string(e) << ' ' << pair_line(r) << '\n';
            g.results.emplace(std::make_pair(e, k), std::move(r));
        }
        g.seconds[e] = since(t0);
    }
    return g;
}

void e1_direction(const Grid& g) {
    const auto& tapf = metric(g.at(Experiment::e1, ControllerKind::f_tapf), "resets");
    const auto& arc = metric(g.at(Experiment::e1, ControllerKind::f_arc), "resets");
    const auto& s2c = metric(g.at(Experiment::e1, ControllerKind::f_s2c), "resets");
    const auto& mpc = metric(g.at(Experiment::e1, ControllerKind::f_mpcred), "resets");
    const bool tapf_ok = tapf.b.mean < tapf.a.mean && tapf.w.p < 0.05;
    const bool arc_ok = arc.b.mean < arc.a.mean && arc.w.p < 0.05;
    const bool s2c_ok = s2c.a.mean - s2c.b.mean >= 0.0;
    const bool mpc_ok = mpc.a.mean - mpc.b.mean >= 0.0;
    const double secs = g.seconds.at(Experiment::e1);
    report(tapf_ok && arc_ok && s2c_ok && mpc_ok && secs < 600.0, "E1 direction",
           "f-tapf " + fmt(tapf.a.mean, 2) + "->" + fmt(tapf.b.mean, 2) + " p " + pfmt(tapf.w.p) + (tapf_ok ? "" : " [x]") +
               "; f-arc " + fmt(arc.a.mean, 2) + "->" + fmt(arc.b.mean, 2) + " p " + pfmt(arc.w.p) +
               (arc_ok ? "" : " [x]") + "; f-s2c " + fmt(s2c.a.mean, 2) + "->" + fmt(s2c.b.mean, 2) +
               (s2c_ok ? "" : " [x]") + "; f-mpcred " + fmt(mpc.a.mean, 2) + "->" + fmt(mpc.b.mean, 2) +
               (mpc_ok ? "" : " [x]") + "; " + fmt(secs, 0) + " s");
}

void e4_direction(const Grid& g) {
    std::string detail;
    bool all = true;
    for (ControllerKind k : {ControllerKind::f_tapf, ControllerKind::f_arc}) {
        const auto& r = metric(g.at(Experiment::e4, k), "resets");
        const auto& m = metric(g.at(Experiment::e4, k), "mdbr");
        const bool ok = r.b.mean < r.a.mean && r.w.p < 0.01 && m.b.mean > m.a.mean && m.w.p < 0.01;
        all = all && ok;
        if (!detail.empty()) detail += "; ";
        detail += std::string(to_string(k)) + " resets " + fmt(r.a.mean, 2) + "->" + fmt(r.b.mean, 2) + " p " +
                  pfmt(r.w.p) + ", mdbr " + fmt(m.a.mean, 2) + "->" + fmt(m.b.mean, 2) + " p " + pfmt(m.w.p) +
                  (ok ? "" : " [x]");
    }
    report(all, "E4 direction", detail);
}

void e2_null(const Grid& g) {
    std::string detail;
    bool all = true;
    for (ControllerKind k : kPairs) {
        const auto& r = metric(g.at(Experiment::e2, k), "resets");
        const bool ok = r.w.p >= 0.01;
        all = all && ok;
        if (!detail.empty()) detail += "; ";
        detail += std::string(to_string(k)) + " diff " + fmt(r.a.mean - r.b.mean, 2) + " p " + pfmt(r.w.p) +
                  (ok ? "" : " [x]");
    }
    report(all, "E2 null", detail);
}

void ballpark(const Grid& g) {
    const auto& r = metric(g.at(Experiment::e4, ControllerKind::f_tapf), "resets");
    const auto& m = metric(g.at(Experiment::e4, ControllerKind::f_tapf), "mdbr");
    const bool ok = r.b.mean >= 11.0 && r.b.mean <= 33.0 && m.b.mean >= 2.1 && m.b.mean <= 8.5;
    report(ok, "magnitude ballpark",
           "E4 f-tapf resets " + fmt(r.b.mean, 2) + " in [11, 33], mdbr " + fmt(m.b.mean, 2) + " m in [2.1, 8.5]");
}

void mu_ablation(const Grid& g) {
    const ExperimentResult& tuned = g.at(Experiment::e4, ControllerKind::f_tapf);
    std::vector<TrialRecord> zero(kTrials);
    parallel_for(kTrials, 0, [&](std::size_t i) {
        TrialConfig c;
        c.experiment = Experiment::e4;
        c.controller = ControllerKind::f_tapf;
        c.mu = 0.0;
        c.seed = kBaseSeed + i;
        zero[i] = {c, run_trial(c)};
    });
    tally(zero);
    const auto s = summarize(zero, tuned.b);
    const auto& r = s.front();
    const bool ok = r.b.mean < r.a.mean && r.w.p < 0.05;
    report(ok, "mu ablation", "E4 f-tapf resets mu=0 " + fmt(r.a.mean, 2) + " vs mu=0.7 " + fmt(r.b.mean, 2) +
                                  " (z " + fmt(r.w.statistic, 2) + ", p " + pfmt(r.w.p) + ")");
}

void calibration() {
    // Displacement error: prediction handed to the controller at frame i against
    // where the walker actually is F_t later.
    const std::size_t want = 100000;
    const int lag = 60;  // F_t = 1 s at 60 Hz
    std::vector<double> errors;
    for (std::uint64_t seed = 5001; errors.size() < want; ++seed) {
        TrialConfig c;
        c.experiment = Experiment::e2;
        c.controller = ControllerKind::f_tapf;
        c.seed = seed;
        std::vector<std::optional<Vec2>> pred;
        std::vector<Vec2> pos;
        TrialHooks h;
        h.on_frame = [&](const FrameRecord& f) {
            pred.push_back(f.predicted_position);
            pos.push_back(f.user.virtual_pose.position);
        };
        tally(run_trial(c, h));
        for (std::size_t i = 0; i + lag < pos.size() && errors.size() < want; ++i)
            if (pred[i]) errors.push_back(distance(*pred[i], pos[i + lag]));
    }
    const MeanSd mde = mean_sd(errors);

    // Direction classifier: random plans through generated scenes.
    Rng rng(77, RngStream::test);
    Rng scene_rng(77, RngStream::scene);
    const SpaceMap v = generate_virtual_space(scene_rng);
    const PathPlanner planner(v, 0.5);
    std::size_t hits = 0, draws = 0;
    while (draws < want) {
        const Vec2 a = oracle::random_free_point(rng, v), b = oracle::random_free_point(rng, v);
        const auto path = planner.try_plan(a, b);
        if (!path) continue;
        for (int j = 0; j < 100 && draws < want; ++j) {
            UserState u;
            u.virtual_pose = {a, rng.uniform(-kPi, kPi)};
            const DirectionDraw d = draw_direction(*path, u, UserParams{}, 1.0, 0.77, rng);
            hits += d.reported == d.true_class;
            ++draws;
        }
    }
    const double acc = double(hits) / double(draws);
    const bool ok = std::abs(mde.mean - 0.45) <= 0.02 && std::abs(mde.sd - 0.35) <= 0.02 && std::abs(acc - 0.77) <= 0.01;
    report(ok, "predictor calibration",
           "MDE " + fmt(mde.mean, 4) + " m, SD " + fmt(mde.sd, 4) + " m over " + std::to_string(errors.size()) +
               " in-episode samples; direction accuracy " + fmt(acc, 4) + " over " + std::to_string(draws) + " draws");
}

void determinism() {
    ExperimentSpec s = spec_for(Experiment::e4, ControllerKind::f_tapf, 12);
    ExperimentSpec m = spec_for(Experiment::e3, ControllerKind::f_mpcred, 12);
    std::string bytes[2];
    const unsigned threads[2] = {1, 4};
    for (int i = 0; i < 2; ++i) {
        s.threads = threads[i];
        m.threads = threads[i];
        const ExperimentResult a = run_experiment(s), b = run_experiment(m);
        tally(a.a);
        tally(a.b);
        tally(b.a);
        tally(b.b);
        std::ostringstream os;
        write_trial_csv(os, {&a, &b});
        write_summary_csv(os, {&a, &b});
        bytes[i] = os.str();
    }
    report(bytes[0] == bytes[1], "thread determinism",
           "trial and summary CSV bytes at 1 vs 4 threads " + std::string(bytes[0] == bytes[1] ? "identical" : "differ") +
               " (" + std::to_string(bytes[0].size()) + " bytes)");
}

void invariants(const Grid& g) {
    (void)g;
    report(g_clamp_violations == 0, "gain clamps",
           std::to_string(g_clamp_violations) + " out-of-range frames across " + std::to_string(g_trials) +
               " trials (" + std::to_string(g_flagged_abnormal) + " grid trials flagged abnormal)");

    const auto mpc = oracle::mpc_pruning_suite(2024, 100);
    report(mpc.failures == 0, "MPC pruning soundness",
           std::to_string(mpc.failures) + "/" + std::to_string(mpc.cases) + " states where pruning changed the result");

    const oracle::SuiteResult geo[] = {oracle::point_segment_suite(11, 1000), oracle::clearance_suite(12, 500),
                                       oracle::raycast_suite(13, 250), oracle::sweep_suite(14, 250)};
    int cases = 0, failures = 0;
    for (const auto& r : geo) {
        cases += r.cases;
        failures += r.failures;
    }
    report(failures == 0, "geometry oracles",
           std::to_string(failures) + "/" + std::to_string(cases) +
               " disagreements (point-segment, clearance, raycast, disc sweep)");

    auto w = oracle::wilcoxon_enumeration_suite(15, 2, 12, 100, 0.03, false);
    const auto tied = oracle::wilcoxon_enumeration_suite(16, 2, 12, 100, 0.03, true);
    w.cases += tied.cases;
    w.failures += tied.failures;
    w.worst = std::max(w.worst, tied.worst);
    const std::vector<double> a{2, 4, 6}, b{1, 2, 3};
    const double t = paired_t_test(a, b).statistic;
    const bool ok = w.failures == 0 && std::abs(t - 3.4641) < 1e-3;
    report(ok, "stats oracles",
           "Wilcoxon vs enumeration n<=12: " + std::to_string(w.failures) + "/" + std::to_string(w.cases) +
               " beyond 0.03 (worst " + fmt(w.worst, 6) + "); paired t " + fmt(t, 4));
}

void write_outputs(const Grid& g, const fs::path& dir) {
    fs::create_directories(dir);
    std::vector<const ExperimentResult*> all;
    for (Experiment e : {Experiment::e1, Experiment::e2, Experiment::e3, Experiment::e4})
        for (ControllerKind k : kPairs) all.push_back(&g.at(e, k));
    std::ofstream trials(dir / "trials.csv"), summary(dir / "summary.csv");
    write_trial_csv(trials, all);
    write_summary_csv(summary, all);
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
    const auto t0 = Clock::now();
    try {
        reduction_exactness();
        std::cerr << "running the E1-E4 grid (" << kTrials << " paired trials per pair)\n";
        const Grid g = run_grid();
        write_outputs(g, out);
        e1_direction(g);
        e4_direction(g);
        e2_null(g);
        ballpark(g);
        mu_ablation(g);
        calibration();
        determinism();
        invariants(g);
    } catch (const std::exception& e) {
        std::cout << "ERROR acceptance suite aborted: " << e.what() << std::endl;
        return 1;
    }
    std::cout << "SUMMARY " << g_pass << " passed, " << g_fail << " failed, " << fmt(since(t0), 0) << " s" << std::endl;
    return 0;
}
