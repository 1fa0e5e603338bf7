#pragma once
/**
 * @file redirection.hpp
 * @brief Gain kinematics, detection-threshold clamps and Reset-to-Center.
 *
 * Conventions: translation gain g_t = virtual / physical displacement, rotation
 * gain g_r = virtual / physical rotation. Curvature bends the physical path by
 * curvature_sign / curvature_radius radians per physical meter walked
 * (+1 = counter-clockwise / left).
 */

#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "frdw/geometry.hpp"
#include "frdw/space_map.hpp"

namespace frdw {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Pose {
    Vec2 position;
    double heading = 0.0;  ///< radians in (-pi, pi]

    Vec2 forward() const { return Vec2::from_angle(heading); }
    bool operator==(const Pose&) const = default;
};

/// Simulated-user constants (OpenRDW defaults).
struct UserParams {
    double body_radius = 0.5;
    double linear_speed = 1.0;
    double angular_speed = kPi / 2.0;
};

struct UserState {
    Pose virtual_pose;
    Pose physical_pose;
    double linear_speed = 0.0;      ///< current virtual walking speed, m/s
    double angular_velocity = 0.0;  ///< current signed virtual turning rate, rad/s
    double body_radius = 0.5;
};

struct GainLimits {
    double gt_min = 0.86;
    double gt_max = 1.26;
    double gr_min = 0.67;
    double gr_max = 1.24;
    double min_curvature_radius = 7.5;
};

struct Gains {
    double gt = 1.0;
    double gr = 1.0;
    double curvature_radius = kInf;
    int curvature_sign = 0;

    /// Signed curvature in 1/m.
    double curvature() const { return curvature_sign == 0 ? 0.0 : curvature_sign / curvature_radius; }
    static Gains with_curvature(double signed_curvature, double gt = 1.0, double gr = 1.0);

    bool operator==(const Gains&) const = default;
};

Gains clamp_gains(const Gains& g, const GainLimits& limits = {});
bool within_limits(const Gains& g, const GainLimits& limits = {});

/// Advances both poses by one frame. Virtual: rotate by dtheta_v, then move dv
/// along the new heading. Physical: rotate by dtheta_v / g_r, then travel an
/// arc of length dv / g_t with the requested curvature.
UserState apply_redirection(const UserState& u, double dv, double dtheta_v, const Gains& g, double dt);

bool check_reset(const UserState& u, const SpaceMap& physical);

struct ResetEvent {
    double time = 0.0;
    Vec2 physical_position;
    double virtual_distance_at_event = 0.0;
};

class UnrecoverablePoseError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

struct ResetParams {
    double blocked_range = 1.0;  ///< center blocked when the body would collide within this distance
    int directions = 72;
};

/// Reset-to-Center: turns the physical heading toward the room center, or toward
/// the direction of maximum free distance when the center is blocked.
/// Free distance is how far the body disc can walk before touching an edge, so a
/// heading that grazes a corner counts as blocked. The virtual pose is untouched.
/// Throws UnrecoverablePoseError when no direction lets the body move at all.
std::pair<UserState, ResetEvent> execute_reset(const UserState& u, const SpaceMap& physical, double time,
                                               double virtual_distance, const ResetParams& params = {});

/// Ordered reset history of one episode.
class ResetLog {
 public:
    void record(const ResetEvent& e);
    std::size_t count() const { return events_.size(); }
    const std::vector<ResetEvent>& events() const { return events_; }

 private:
    std::vector<ResetEvent> events_;
};

}  // namespace frdw
