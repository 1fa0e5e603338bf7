#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "frdw/environment.hpp"
#include "frdw/scene_io.hpp"
#include "oracles.hpp"

using namespace frdw;

TEST_CASE("clearance and raycast in the E1 room") {
    const SpaceMap m = build_physical_space(Experiment::e1);
    CHECK(m.min_clearance({0, 0}) == doctest::Approx(2.0));
    CHECK(m.min_clearance({1.5, 0}) == doctest::Approx(0.5));
    CHECK(m.min_clearance({3, 0}) == 0.0);
    auto hit = m.raycast({0, 0}, {1, 0}, 10.0);
    REQUIRE(hit);
    CHECK(*hit == doctest::Approx(2.0));
    CHECK(*m.raycast({0, 0}, {1, 0}, 1.0) == doctest::Approx(1.0));
    CHECK_FALSE(m.raycast({3, 0}, {1, 0}, 10.0));
}

TEST_CASE("obstacles count for clearance and sweeps") {
    const SpaceMap m = build_physical_space(Experiment::e3);
    CHECK_FALSE(m.in_free_space({0, 0}));
    CHECK(m.min_clearance({3, 0}) == doctest::Approx(1.0));
    CHECK(m.boundary_clearance({3, 0}) == doctest::Approx(2.0));
    CHECK(m.sweep({4, 0}, {-1, 0}, 0.5, 100.0) == doctest::Approx(1.5));
    CHECK(m.sweep({0, 0}, {1, 0}, 0.5, 100.0) == 0.0);
}

TEST_CASE("oracle suites: clearance, raycast, disc sweep") {
    CHECK(oracle::clearance_suite(2, 100).failures == 0);
    CHECK(oracle::raycast_suite(3, 50).failures == 0);
    CHECK(oracle::sweep_suite(4, 50).failures == 0);
}

TEST_CASE("invalid spaces are rejected") {
    const Polygon room = Polygon::axis_square({0, 0}, 4);
    CHECK_THROWS_AS(SpaceMap(room, {Polygon::axis_square({2, 0}, 1)}, SpaceKind::physical), GeometryError);
    CHECK_THROWS_AS(SpaceMap(room, {Polygon::axis_square({0, 0}, 1), Polygon::axis_square({0.5, 0}, 1)},
                             SpaceKind::physical),
                    GeometryError);
}

TEST_CASE("scene files round-trip") {
    const SpaceMap m = build_physical_space(Experiment::e4);
    const SpaceMap back = scene_from_string(scene_to_string(m));
    CHECK(back == m);
    CHECK_THROWS(scene_from_string("{\"frame\": \"physical\"}"));
    CHECK_THROWS(scene_from_string("not json"));
}
