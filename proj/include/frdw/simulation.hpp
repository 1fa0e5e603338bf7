#pragma once
/**
 * @file simulation.hpp
 * @brief The fixed-rate episode engine and the paired Monte Carlo harness.
 *
 * A trial is a pure function of its TrialConfig: the seed is split into
 * independent streams for the scene, the initial poses, the targets and the
 * predictor, so swapping the controller never perturbs the world.
 */

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "frdw/controllers.hpp"
#include "frdw/environment.hpp"
#include "frdw/stats.hpp"

namespace frdw {

enum class PredictorKind { oracle, cv };

std::string_view to_string(PredictorKind k);
PredictorKind predictor_from_string(std::string_view s);

/// mu used by a future variant when the config leaves it unset.
double default_mu(ControllerKind k);

struct TrialConfig {
    Experiment experiment = Experiment::e1;
    ControllerKind controller = ControllerKind::s2c;
    PredictorKind predictor = PredictorKind::oracle;
    std::optional<double> mu;  ///< unset: default_mu(controller)
    double f_t = 1.0;
    std::uint64_t seed = 0;
    double distance_budget = 100.0;
    double frame_rate = 60.0;
    double max_sim_time = 3600.0;  ///< safety stop, flagged when hit

    UserParams user;
    NoiseModel noise;
    double dir_accuracy = 0.77;
    double dir_confidence = 0.77;  ///< probability put on the reported class; 1/3 gives uniform gamma
    double noise_hold = 0.0;  ///< seconds an oracle error vector is kept before a fresh draw; 0 = every frame
    double prediction_cooldown = 0.5;  ///< prediction suspended this long after a reset

    ControllerParams controller_params;
    ResetParams reset;
    VirtualSceneParams scene;
    TargetParams targets;
    double start_clearance = 0.1;  ///< extra clearance beyond body_radius for initial poses

    double resolved_mu() const;
    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

namespace flags {
inline constexpr unsigned no_reset = 1u << 0;
inline constexpr unsigned unrecoverable = 1u << 1;
inline constexpr unsigned time_limit = 1u << 2;
inline constexpr unsigned clamp_violation = 1u << 3;
inline constexpr unsigned target_failure = 1u << 4;
}  // namespace flags

std::string flags_to_string(unsigned f);

struct EpisodeMetrics {
    std::size_t resets = 0;
    double virtual_distance = 0.0;
    double mdbr = 0.0;
    std::size_t targets_collected = 0;
    std::size_t frames = 0;
    std::size_t clamp_violations = 0;
    unsigned flags = 0;
    double wall_time = 0.0;  ///< seconds; not part of any CSV
};

/// Resets at virtual distances [10, 30, 60] with total 100 give mean(10, 20, 30).
/// With no resets the result is the total distance and *no_reset is set.
double compute_mdbr(const std::vector<ResetEvent>& resets, double total_virtual_distance, bool* no_reset = nullptr);

/// Per-frame snapshot handed to observers and kept in traces.
struct FrameRecord {
    double time = 0.0;
    UserState user;               ///< state the decision was made for
    SteeringDecision decision;
    bool predicted = false;
    bool reset = false;           ///< a reset fired at the end of this frame
    Vec2 physical_after;
    std::optional<Vec2> predicted_position;  ///< future virtual position handed to the controller
};

struct TrialTrace {
    SpaceMap physical;
    SpaceMap virtual_space;
    std::vector<FrameRecord> frames;
    std::vector<ResetEvent> resets;
};

struct TrialHooks {
    std::function<void(const SpaceMap& physical, const SpaceMap& virtual_space)> on_start;
    std::function<void(const FrameRecord&)> on_frame;
    std::function<void(const ResetEvent&)> on_reset;
};

EpisodeMetrics run_trial(const TrialConfig& cfg, const TrialHooks& hooks = {});

/// Runs one trial and keeps every frame.
TrialTrace record_trace(const TrialConfig& cfg, EpisodeMetrics* metrics = nullptr);

// ---- harness ----------------------------------------------------------------------

struct TrialRecord {
    TrialConfig config;
    EpisodeMetrics metrics;
};

struct MetricSummary {
    std::string metric;
    MeanSd a;
    MeanSd b;
    TestResult t;
    TestResult w;
    std::size_t n = 0;
};

struct ExperimentSpec {
    Experiment experiment = Experiment::e1;
    ControllerKind arm_a = ControllerKind::tapf;    ///< usually the vanilla controller
    ControllerKind arm_b = ControllerKind::f_tapf;  ///< usually its future variant
    std::size_t trials = 100;
    std::uint64_t base_seed = 1;
    TrialConfig base;  ///< experiment, controller and seed are overwritten per trial
    unsigned threads = 0;  ///< 0: hardware concurrency
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<TrialRecord> a;
    std::vector<TrialRecord> b;
    std::vector<MetricSummary> summaries;  ///< resets, mdbr
};

/// Runs fn(i) for i in [0, n) on a pool of worker threads.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Paired summaries for two equally sized lists of trials (a - b differences).
std::vector<MetricSummary> summarize(const std::vector<TrialRecord>& a, const std::vector<TrialRecord>& b);

enum class SweepParam { mu, f_t };
std::string_view to_string(SweepParam p);
SweepParam sweep_param_from_string(std::string_view s);

struct SweepPoint {
    double value = 0.0;
    ExperimentResult result;
};

std::vector<SweepPoint> sweep(SweepParam param, const std::vector<double>& grid, const ExperimentSpec& fixed);

/// "0:1:0.1" -> 0, 0.1, ..., 1 (inclusive, endpoints snapped); "0.5,1,2" -> list.
std::vector<double> parse_grid(std::string_view text);

// ---- CSV ------------------------------------------------------------------------

/// Shortest round-trip decimal form.
std::string format_double(double v);

inline constexpr const char* kTrialCsvHeader =
    "experiment,controller,mu,f_t,seed,resets,virtual_distance,mdbr,targets,flags";
inline constexpr const char* kSummaryCsvHeader =
    "experiment,controller_a,controller_b,mu,f_t,metric,mean_a,sd_a,mean_b,sd_b,t,p_t,z,p_w,n";
inline constexpr const char* kSweepCsvHeader =
    "param,value,experiment,controller_a,controller_b,mu,f_t,metric,mean_a,sd_a,mean_b,sd_b,t,p_t,z,p_w,n";

std::string trial_csv_row(const TrialRecord& r);
void write_trial_csv(std::ostream& os, const std::vector<const ExperimentResult*>& results);
void write_summary_csv(std::ostream& os, const std::vector<const ExperimentResult*>& results);
void write_sweep_csv(std::ostream& os, SweepParam param, const std::vector<SweepPoint>& points);

}  // namespace frdw
