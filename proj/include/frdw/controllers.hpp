#pragma once
/**
 * @file controllers.hpp
 * @brief Redirection controllers S2C, TAPF, ARC and MPCRed, and their
 * future-aware variants that fuse a predicted future position (or direction
 * probabilities) with the current state through a weight mu.
 *
 * Every controller returns gains that already satisfy the detection-threshold
 * clamps. The vanilla controllers are the mu = 0 (uniform gamma for MPCRed)
 * special cases of the fused ones.
 */

#include <array>
#include <memory>
#include <optional>
#include <string_view>

#include "frdw/predictor.hpp"
#include "frdw/redirection.hpp"

namespace frdw {

enum class MpcAction { none = 0, curvature_left = 1, curvature_right = 2 };

std::string_view to_string(MpcAction a);

struct FusionWeight {
    double mu = 0.0;

    FusionWeight() = default;
    explicit FusionWeight(double m);
};

struct ControllerParams {
    GainLimits limits;
    double dead_zone = 2.0 * kPi / 180.0;  ///< no bending below this heading error

    double tapf_spacing = 0.25;

    double arc_range = 10.0;
    double arc_saturation = 0.5;     ///< ml above which curvature is at its maximum
    double arc_distance_floor = 0.1;
    bool arc_future_orientation_from_algorithm = false;  ///< use u_c - u_f instead of u_f - u_c

    int mpc_depth = 4;
    double mpc_alpha = 0.8;
    double mpc_segment_length = 1.0;
    double mpc_sample_step = 0.25;
    double mpc_reset_cost = 1000.0;
    double mpc_action_cost = 0.1;
    double mpc_proximity_range = 1.0;
    double mpc_replan_interval = 0.5;
};

struct SteeringDecision {
    Gains gains;
    Vec2 steer_direction;           ///< physical target direction (S2C/TAPF)
    Vec2 force;                     ///< net force (TAPF)
    double ml_current = 0.0;        ///< ARC misalignment
    double ml_future = 0.0;
    std::optional<Vec2> overlay;    ///< future position in physical coordinates
    MpcAction action = MpcAction::none;
};

// ---- shared primitives ------------------------------------------------------

SteeringDecision steer_to_target(const UserState& u, const Vec2& target_dir, const ControllerParams& params = {});

/// Predicted virtual displacement re-expressed at the current physical pose,
/// pushed inside the room (and out of obstacles) by body_radius.
Vec2 overlay_future_position(const UserState& u, const Prediction& pred, const SpaceMap& physical);

// ---- S2C ----------------------------------------------------------------------

SteeringDecision s2c(const UserState& u, const SpaceMap& physical, const ControllerParams& params = {});
SteeringDecision f_s2c(const UserState& u, const Prediction& pred, FusionWeight mu, const SpaceMap& physical,
                       const ControllerParams& params = {});

// ---- TAPF ---------------------------------------------------------------------

/// Resultant repulsive force at p: sum over edge samples s of (p - s) * spacing / |p - s|^3.
Vec2 compute_tapf_force(const Vec2& p, const SpaceMap& physical, double spacing = 0.25);

SteeringDecision f_tapf(const UserState& u, const Prediction& pred, FusionWeight mu, const SpaceMap& physical,
                        const ControllerParams& params = {});
SteeringDecision tapf(const UserState& u, const SpaceMap& physical, const ControllerParams& params = {});

// ---- ARC ----------------------------------------------------------------------

struct Misalignment {
    double ml = 0.0;
    std::array<double, 3> physical{};  ///< front, left, right
    std::array<double, 3> virtual_{};
};

Misalignment compute_misalign(const Pose& virtual_pose, const Pose& physical_pose, const SpaceMap& vspace,
                              const SpaceMap& pspace, double range = 10.0);

/// Translation gain and signed curvature for one misalignment measurement.
struct ArcGains {
    double gt = 1.0;
    double curvature = 0.0;
};
ArcGains arc_gains(const Misalignment& m, const ControllerParams& params = {});

SteeringDecision f_arc(const UserState& u, const Prediction& pred, FusionWeight mu, const SpaceMap& vspace,
                       const SpaceMap& pspace, const ControllerParams& params = {});
/// previous_ml: misalignment of the previous frame (nullopt on the first frame).
SteeringDecision arc(const UserState& u, std::optional<double> previous_ml, const SpaceMap& vspace,
                     const SpaceMap& pspace, const ControllerParams& params = {});

// ---- MPCRed -------------------------------------------------------------------

struct StageCost {
    double total = 0.0;
    bool reset = false;
    double proximity = 0.0;
    double action = 0.0;
};

struct StageResult {
    UserState next;
    StageCost cost;
};

Gains mpc_action_gains(MpcAction a, const ControllerParams& params = {});

/// APPLY: turn the virtual heading toward `hypothesis`, then walk one segment
/// under the action's gains, scoring resets and wall proximity along the way.
StageResult mpc_apply(const UserState& state, MpcAction a, Direction hypothesis, const SpaceMap& physical,
                      const ControllerParams& params = {});

double mpc_stage_cost(const UserState& state, MpcAction a, Direction hypothesis, const SpaceMap& physical,
                      const ControllerParams& params = {});

struct MpcResult {
    MpcAction action = MpcAction::none;
    double cost = 0.0;
    long nodes = 0;  ///< APPLY evaluations
};

/// Recursive expected-cost search over {none, left, right} x {forward, left, right}
/// with branch-and-bound cuts. k counts stages (k = 1 is a single stage).
MpcResult f_mpcred(const UserState& u, const DirectionProbs& gamma, const SpaceMap& physical, int k, double alpha,
                   const ControllerParams& params = {}, bool prune = true);

inline MpcResult mpcred(const UserState& u, const SpaceMap& physical, int k, double alpha,
                        const ControllerParams& params = {}, bool prune = true) {
    return f_mpcred(u, DirectionProbs::uniform(), physical, k, alpha, params, prune);
}

/// Full (unpruned) expected cost of each root action: {none, left, right}.
std::array<double, 3> mpc_root_costs(const UserState& u, const DirectionProbs& gamma, const SpaceMap& physical,
                                     int k, double alpha, const ControllerParams& params = {});

// ---- per-trial controller objects ------------------------------------------------

enum class ControllerKind { s2c, f_s2c, tapf, f_tapf, arc, f_arc, mpcred, f_mpcred };

std::string_view to_string(ControllerKind k);
ControllerKind controller_from_string(std::string_view s);
bool is_future_variant(ControllerKind k);
ControllerKind vanilla_of(ControllerKind k);
ControllerKind future_of(ControllerKind k);

struct ControllerFrame {
    const UserState& user;
    const SpaceMap& physical;
    const SpaceMap& virtual_space;
    /// Null when prediction is unavailable (e.g. right after a reset).
    const Prediction* prediction = nullptr;
    const DirectionProbs* gamma = nullptr;
    double mu = 0.0;
    double time = 0.0;
};

class Controller {
 public:
    virtual ~Controller() = default;
    virtual ControllerKind kind() const = 0;
    virtual bool wants_position() const { return false; }
    virtual bool wants_direction() const { return false; }
    /// True when a new decision will be computed this frame (MPC re-plans at a fixed rate).
    virtual bool deciding(double /*time*/) const { return true; }
    virtual SteeringDecision decide(const ControllerFrame& frame) = 0;
};

std::unique_ptr<Controller> make_controller(ControllerKind kind, const ControllerParams& params = {});

}  // namespace frdw
