#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "frdw/agent.hpp"
#include "frdw/environment.hpp"

using namespace frdw;

TEST_CASE("physical spaces") {
    CHECK(build_physical_space(Experiment::e1).boundary().signed_area() == doctest::Approx(16.0));
    CHECK(build_physical_space(Experiment::e2).obstacles().empty());
    CHECK(build_physical_space(Experiment::e3).obstacles().size() == 1);
    const SpaceMap e4 = build_physical_space(Experiment::e4);
    REQUIRE(e4.obstacles().size() == 4);
    for (const Polygon& o : e4.obstacles()) {
        CHECK(o.signed_area() == doctest::Approx(4.0));
        CHECK(std::abs(o.centroid().x) == doctest::Approx(2.5));
        CHECK(std::abs(o.centroid().y) == doctest::Approx(2.5));
    }
    CHECK(experiment_from_string("E4") == Experiment::e4);
    CHECK_THROWS(experiment_from_string("e5"));
}

TEST_CASE("virtual scenes are seeded, walled and connected") {
    Rng a(7, RngStream::scene), b(7, RngStream::scene), c(8, RngStream::scene);
    const SpaceMap sa = generate_virtual_space(a), sb = generate_virtual_space(b), sc = generate_virtual_space(c);
    CHECK(sa == sb);
    CHECK_FALSE(sa == sc);
    CHECK(sa.obstacles().size() >= 10);
    CHECK(sa.obstacles().size() <= 15);
    CHECK(sa.connectivity() >= kConnectivityThreshold);
}

TEST_CASE("targets respect the distance band and clearance") {
    Rng scene(3, RngStream::scene);
    const SpaceMap v = generate_virtual_space(scene);
    const PathPlanner planner(v, 0.5);
    Rng rng(3, RngStream::targets);
    const Vec2 from{0.0, 0.0};
    Vec2 origin = from;
    while (!v.in_free_space(origin) || v.min_clearance(origin) < 0.6) origin += Vec2{0.3, 0.1};
    for (int i = 0; i < 50; ++i) {
        const Target t = spawn_target(rng, origin, v, [&](const Vec2& p) { return planner.reachable(origin, p); });
        const double d = distance(t.position, origin);
        CHECK(d >= 0.2);
        CHECK(d <= 8.0);
        CHECK(v.min_clearance(t.position) >= 0.3);
    }
}
