#pragma once
/**
 * @file agent.hpp
 * @brief Simulated user: grid A* with string pulling in the virtual scene, and a
 * turn-then-walk locomotion policy that follows the resulting waypoints.
 */

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "frdw/environment.hpp"
#include "frdw/redirection.hpp"

namespace frdw {

struct PlannedPath {
    std::vector<Vec2> waypoints;  ///< first = start, last = target
    std::size_t cursor = 0;       ///< index of the waypoint currently walked to

    const Vec2& goal() const { return waypoints.back(); }
    double length() const;
    bool at_last_leg() const { return cursor + 1 >= waypoints.size(); }
};

class PlanningError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

struct PlannerParams {
    double resolution = 0.25;
    double margin = 0.02;          ///< extra clearance demanded of smoothed legs
    double connect_radius = 0.75;  ///< how far start/goal may link into the grid
};

/// Occupancy grid over a SpaceMap inflated by body_radius. Every 8-neighbour
/// move between free cells keeps the disc agent at least body_radius + margin
/// away from walls, so smoothed plans are collision-free.
class PathPlanner {
 public:
    PathPlanner(SpaceMap space, double body_radius, PlannerParams params = {});

    const SpaceMap& space() const { return space_; }
    double body_radius() const { return radius_; }

    /// Throws PlanningError when `to` cannot be reached from `from`.
    PlannedPath plan(const Vec2& from, const Vec2& to) const;
    std::optional<PlannedPath> try_plan(const Vec2& from, const Vec2& to) const;
    bool reachable(const Vec2& from, const Vec2& to) const;

    /// Segment keeps at least `min_clearance` from every edge and starts in free space.
    bool visible(const Vec2& a, const Vec2& b, double min_clearance) const;
    bool cell_free(int i, int j) const { return free_[index(i, j)] != 0; }
    Vec2 cell_center(int i, int j) const;
    int nx() const { return nx_; }
    int ny() const { return ny_; }

 private:
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
    std::vector<std::size_t> connect(const Vec2& p, double min_clearance) const;
    double leg_clearance(const Vec2& from) const;

    SpaceMap space_;
    double radius_;
    PlannerParams params_;
    int nx_ = 0;
    int ny_ = 0;
    std::vector<char> free_;
    std::vector<int> component_;
};

PlannedPath plan_virtual_path(const Vec2& from, const Target& to, const SpaceMap& vspace, double body_radius);

struct MotionCommand {
    double dv = 0.0;
    double dtheta = 0.0;
    bool target_reached = false;
};

inline constexpr double kAlignTolerance = 5.0 * kPi / 180.0;

/// One frame of turn-then-walk: rotate in place until within 5 deg of the next
/// waypoint, then walk (correcting heading at no more than angular_speed).
MotionCommand step_agent(PlannedPath& path, const UserState& u, const UserParams& params, double dt,
                         double collect_radius = 0.2);

struct PlanRollout {
    Pose pose;
    std::size_t cursor = 0;
};

/// Continuous-time turn-then-walk along the remaining plan for `horizon` seconds
/// (full turn toward each waypoint, then straight walk), clamped at the plan end.
PlanRollout rollout_plan(const PlannedPath& path, const Pose& virtual_pose, const UserParams& params,
                         double horizon);

Vec2 future_point_on_plan(const PlannedPath& path, const UserState& u, const UserParams& params, double horizon);

}  // namespace frdw
