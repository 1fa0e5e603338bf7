#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "frdw/agent.hpp"

using namespace frdw;

namespace {

SpaceMap open_room() { return SpaceMap(Polygon::axis_square({0, 0}, 20), {}, SpaceKind::virtual_space); }

SpaceMap walled_room() {
    return SpaceMap(Polygon::axis_square({0, 0}, 20), {Polygon::rectangle({0, 0}, 0.2, 8)}, SpaceKind::virtual_space);
}

}  // namespace

TEST_CASE("open room plans a straight line") {
    const PathPlanner p(open_room(), 0.5);
    const PlannedPath path = p.plan({-3, 0}, {4, 1});
    REQUIRE(path.waypoints.size() == 2);
    CHECK(path.length() == doctest::Approx(std::hypot(7.0, 1.0)));
}

TEST_CASE("plans around a wall keep the body clear") {
    const SpaceMap m = walled_room();
    const PathPlanner p(m, 0.5);
    const PlannedPath path = p.plan({-3, 0}, {3, 0});
    CHECK(path.waypoints.size() > 2);
    CHECK(path.length() > 6.0);
    for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
        const Segment leg(path.waypoints[i], path.waypoints[i + 1]);
        for (const Segment& e : m.edges()) CHECK(distance_segment_segment(leg, e) >= 0.5);
    }
    CHECK_FALSE(p.reachable({-3, 0}, {0, 0}));
    CHECK_THROWS_AS(p.plan({-3, 0}, {0, 0}), PlanningError);
}

TEST_CASE("turn-then-walk") {
    PlannedPath path{{{0, 0}, {0, 5}}, 0};
    UserState u;
    u.virtual_pose = {{0, 0}, 0.0};
    const UserParams params;
    const double dt = 1.0 / 60;
    MotionCommand c = step_agent(path, u, params, dt);
    CHECK(c.dv == 0.0);
    CHECK(c.dtheta == doctest::Approx(params.angular_speed * dt));
    u.virtual_pose.heading = kPi / 2;
    c = step_agent(path, u, params, dt);
    CHECK(c.dv == doctest::Approx(dt));
    CHECK(c.dtheta == doctest::Approx(0.0));
    u.virtual_pose.position = {0, 4.9};
    c = step_agent(path, u, params, dt);
    CHECK(c.target_reached);
}

TEST_CASE("walking the plan frame by frame matches the continuous rollout") {
    PlannedPath path{{{0, 0}, {3, 0}, {3, 3}}, 0};
    UserState u;
    u.virtual_pose = {{0, 0}, 0.0};
    const UserParams params;
    const double dt = 1.0 / 600;
    const PlanRollout r = rollout_plan(path, u.virtual_pose, params, 4.0);
    PlannedPath walk = path;
    for (int i = 0; i < 2400; ++i) {
        const MotionCommand c = step_agent(walk, u, params, dt, 0.0);
        u.virtual_pose.heading = wrap_angle(u.virtual_pose.heading + c.dtheta);
        u.virtual_pose.position += u.virtual_pose.forward() * c.dv;
    }
    // The frame-wise walker turns inside a 5 deg band, so allow a small lag.
    CHECK(distance(u.virtual_pose.position, r.pose.position) < 0.1);
    CHECK(distance(future_point_on_plan(path, UserState{}, params, 100.0), Vec2{3, 3}) < 1e-9);
}
