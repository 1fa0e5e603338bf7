#include "frdw/environment.hpp"

#include <string>

namespace frdw {

std::string_view to_string(Experiment e) {
    switch (e) {
        case Experiment::e1: return "e1";
        case Experiment::e2: return "e2";
        case Experiment::e3: return "e3";
        case Experiment::e4: return "e4";
    }
    return "?";
}

Experiment experiment_from_string(std::string_view s) {
    if (s == "e1" || s == "E1") return Experiment::e1;
    if (s == "e2" || s == "E2") return Experiment::e2;
    if (s == "e3" || s == "E3") return Experiment::e3;
    if (s == "e4" || s == "E4") return Experiment::e4;
    throw std::invalid_argument("unknown experiment '" + std::string(s) + "' (expected e1..e4)");
}

SpaceMap build_physical_space(Experiment e) {
    switch (e) {
        case Experiment::e1: return {Polygon::axis_square({0, 0}, 4.0), {}, SpaceKind::physical};
        case Experiment::e2: return {Polygon::axis_square({0, 0}, 10.0), {}, SpaceKind::physical};
        case Experiment::e3:
            return {Polygon::axis_square({0, 0}, 10.0), {Polygon::axis_square({0, 0}, 4.0)}, SpaceKind::physical};
        case Experiment::e4: {
            std::vector<Polygon> obs;
            for (Vec2 c : {Vec2{2.5, 2.5}, Vec2{-2.5, 2.5}, Vec2{-2.5, -2.5}, Vec2{2.5, -2.5}})
                obs.push_back(Polygon::axis_square(c, 2.0));
            return {Polygon::axis_square({0, 0}, 10.0), std::move(obs), SpaceKind::physical};
        }
    }
    throw std::invalid_argument("build_physical_space: bad experiment");
}

SpaceMap generate_virtual_space(Rng& rng, const VirtualSceneParams& p) {
    const Polygon boundary = Polygon::axis_square({0, 0}, 2.0 * p.half_extent);
    const int wanted = rng.uniform_int(p.min_walls, p.max_walls);
    std::vector<Polygon> walls;
    int attempts = 0;
    while (static_cast<int>(walls.size()) < wanted) {
        if (++attempts > p.max_attempts)
            throw GenerationError("generate_virtual_space: rejection budget exhausted");
        const Vec2 c{rng.uniform(-p.half_extent, p.half_extent), rng.uniform(-p.half_extent, p.half_extent)};
        const double angle = rng.uniform(0.0, kPi);
        Polygon wall = Polygon::rectangle(c, p.wall_length, p.wall_thickness, angle);
        bool ok = true;
        for (const Vec2& v : wall.vertices()) {
            if (!boundary.contains(v) || distance_point_polygon_boundary(v, boundary) < p.min_separation) {
                ok = false;
                break;
            }
        }
        for (std::size_t i = 0; ok && i < walls.size(); ++i)
            ok = distance_polygon_polygon(wall, walls[i]) >= p.min_separation;
        if (!ok) continue;
        walls.push_back(std::move(wall));
        if (static_cast<int>(walls.size()) == wanted) {
            try {
                return SpaceMap(boundary, walls, SpaceKind::virtual_space);
            } catch (const GeometryError&) {
                walls.pop_back();  // disconnected; resample the last wall
            }
        }
    }
    return SpaceMap(boundary, walls, SpaceKind::virtual_space);
}

Target spawn_target(Rng& rng, const Vec2& agent_pos, const SpaceMap& space, const ReachabilityFn& reachable,
                    const TargetParams& p) {
    for (int draw = 0; draw < p.max_draws; ++draw) {
        const double r = rng.uniform(p.min_distance, p.max_distance);
        const double a = rng.uniform(-kPi, kPi);
        const Vec2 pos = agent_pos + Vec2::from_angle(a) * r;
        if (!space.in_free_space(pos) || space.min_clearance(pos) < p.min_clearance) continue;
        if (reachable && !reachable(pos)) continue;
        return {pos, p.collect_radius};
    }
    throw GenerationError("spawn_target: no valid target within draw budget");
}

}  // namespace frdw
