#pragma once
/**
 * @file environment.hpp
 * @brief Physical rooms E1-E4, randomized virtual wall scenes and target spawning.
 */

#include <functional>
#include <stdexcept>
#include <string_view>

#include "frdw/rng.hpp"
#include "frdw/space_map.hpp"

namespace frdw {

enum class Experiment { e1, e2, e3, e4 };

std::string_view to_string(Experiment e);
Experiment experiment_from_string(std::string_view s);

/// E1: empty 4x4 m. E2: empty 10x10 m. E3: 10x10 m with a central 4x4 m obstacle.
/// E4: 10x10 m with four 2x2 m obstacles centered at (+-2.5, +-2.5).
SpaceMap build_physical_space(Experiment e);

struct VirtualSceneParams {
    double half_extent = 10.0;
    int min_walls = 10;
    int max_walls = 15;
    double wall_length = 4.0;
    double wall_thickness = 0.1;
    double min_separation = 0.6;
    int max_attempts = 10'000;
};

class GenerationError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Random walled virtual scene. Throws GenerationError when the rejection budget runs out.
SpaceMap generate_virtual_space(Rng& rng, const VirtualSceneParams& params = {});

struct Target {
    Vec2 position;
    double radius = 0.2;
};

struct TargetParams {
    double min_distance = 0.2;
    double max_distance = 8.0;
    double min_clearance = 0.3;
    double collect_radius = 0.2;
    int max_draws = 10'000;
};

using ReachabilityFn = std::function<bool(const Vec2&)>;

/// Draws a target in the distance band around agent_pos. Throws GenerationError when
/// no draw satisfies the band, clearance and reachability constraints.
Target spawn_target(Rng& rng, const Vec2& agent_pos, const SpaceMap& space, const ReachabilityFn& reachable,
                    const TargetParams& params = {});

}  // namespace frdw
