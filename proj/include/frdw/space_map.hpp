#pragma once
/**
 * @file space_map.hpp
 * @brief Polygonal free space: one boundary plus interior obstacles.
 *
 * The same type describes physical rooms and virtual scenes. Construction
 * validates containment, non-overlap and connectivity so downstream code can
 * assume a well-formed walkable region.
 */

#include <optional>
#include <string_view>
#include <vector>

#include "frdw/geometry.hpp"

namespace frdw {

enum class SpaceKind { physical, virtual_space };

std::string_view to_string(SpaceKind k);
SpaceKind space_kind_from_string(std::string_view s);

class SpaceMap {
 public:
    /// Throws GeometryError when an invariant does not hold.
    SpaceMap(Polygon boundary, std::vector<Polygon> obstacles, SpaceKind kind);

    const Polygon& boundary() const { return boundary_; }
    const std::vector<Polygon>& obstacles() const { return obstacles_; }
    SpaceKind kind() const { return kind_; }
    /// Boundary edges first, then obstacle edges in obstacle order.
    const std::vector<Segment>& edges() const { return edges_; }
    std::size_t boundary_edge_count() const { return boundary_.size(); }

    Vec2 center() const { return center_; }
    Vec2 bbox_min() const { return lo_; }
    Vec2 bbox_max() const { return hi_; }

    /// Inside the boundary (inclusive) and not inside any obstacle (inclusive).
    bool in_free_space(const Vec2& p) const;

    /// Distance to the nearest boundary or obstacle edge; 0 outside free space.
    double min_clearance(const Vec2& p) const;

    /// Distance to the nearest boundary edge only (ignores obstacles).
    double boundary_clearance(const Vec2& p) const;

    /// First hit along unit `dir`; max_range when nothing is closer.
    /// nullopt when the origin is not in free space.
    std::optional<double> raycast(const Vec2& origin, const Vec2& dir, double max_range) const;

    /// How far a disc of `radius` at origin can travel along unit `dir` before it
    /// touches an edge, capped at max_range. 0 when the origin is not free.
    double sweep(const Vec2& origin, const Vec2& dir, double radius, double max_range) const;

    /// Fraction of free grid cells reachable from the first free cell (4-neighbour flood fill).
    double connectivity(double resolution = 0.25) const;

    bool operator==(const SpaceMap& o) const {
        return kind_ == o.kind_ && boundary_ == o.boundary_ && obstacles_ == o.obstacles_;
    }

 private:
    Polygon boundary_;
    std::vector<Polygon> obstacles_;
    SpaceKind kind_;
    std::vector<Segment> edges_;
    Vec2 center_;
    Vec2 lo_;
    Vec2 hi_;
};

inline double min_clearance(const Vec2& p, const SpaceMap& space) { return space.min_clearance(p); }
inline std::optional<double> raycast(const Vec2& origin, const Vec2& dir, const SpaceMap& space, double max_range) {
    return space.raycast(origin, dir, max_range);
}

inline constexpr double kConnectivityThreshold = 0.95;

}  // namespace frdw
