#include "frdw/space_map.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace frdw {

std::string_view to_string(SpaceKind k) { return k == SpaceKind::physical ? "physical" : "virtual"; }

SpaceKind space_kind_from_string(std::string_view s) {
    if (s == "physical") return SpaceKind::physical;
    if (s == "virtual") return SpaceKind::virtual_space;
    throw GeometryError("unknown space kind: " + std::string(s));
}

SpaceMap::SpaceMap(Polygon boundary, std::vector<Polygon> obstacles, SpaceKind kind)
    : boundary_(std::move(boundary)), obstacles_(std::move(obstacles)), kind_(kind) {
    for (std::size_t i = 0; i < obstacles_.size(); ++i) {
        const Polygon& o = obstacles_[i];
        for (const Vec2& v : o.vertices())
            if (!boundary_.contains(v) || distance_point_polygon_boundary(v, boundary_) <= kGeomEps)
                throw GeometryError("SpaceMap: obstacle " + std::to_string(i) + " not strictly inside boundary");
        if (distance_polygon_polygon(o, boundary_) <= kGeomEps)
            throw GeometryError("SpaceMap: obstacle " + std::to_string(i) + " touches boundary");
        for (std::size_t j = 0; j < i; ++j) {
            const Polygon& q = obstacles_[j];
            if (distance_polygon_polygon(o, q) <= kGeomEps || o.contains(q.vertices()[0]) ||
                q.contains(o.vertices()[0]))
                throw GeometryError("SpaceMap: obstacles " + std::to_string(j) + " and " + std::to_string(i) +
                                    " overlap");
        }
    }
    edges_ = boundary_.edges();
    for (const auto& o : obstacles_)
        for (std::size_t i = 0; i < o.size(); ++i) edges_.push_back(o.edge(i));

    lo_ = hi_ = boundary_.vertices()[0];
    for (const Vec2& v : boundary_.vertices()) {
        lo_ = {std::min(lo_.x, v.x), std::min(lo_.y, v.y)};
        hi_ = {std::max(hi_.x, v.x), std::max(hi_.y, v.y)};
    }
    center_ = boundary_.centroid();

    if (connectivity() < kConnectivityThreshold) throw GeometryError("SpaceMap: free space is not connected");
}

bool SpaceMap::in_free_space(const Vec2& p) const {
    if (!boundary_.contains(p)) return false;
    for (const auto& o : obstacles_)
        if (o.contains(p)) return false;
    return true;
}

double SpaceMap::min_clearance(const Vec2& p) const {
    if (!in_free_space(p)) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (const Segment& s : edges_) d = std::min(d, distance_point_segment(p, s));
    return d;
}

double SpaceMap::boundary_clearance(const Vec2& p) const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < boundary_.size(); ++i) d = std::min(d, distance_point_segment(p, edges_[i]));
    return d;
}

std::optional<double> SpaceMap::raycast(const Vec2& origin, const Vec2& dir, double max_range) const {
    if (!in_free_space(origin)) return std::nullopt;
    double best = max_range;
    for (const Segment& s : edges_)
        if (auto t = ray_segment_hit(origin, dir, s); t && *t < best) best = *t;
    return best;
}

double SpaceMap::sweep(const Vec2& origin, const Vec2& dir, double radius, double max_range) const {
    if (!in_free_space(origin)) return 0.0;
    double best = max_range;
    for (const Segment& s : edges_) best = std::min(best, disc_sweep_hit(origin, dir, radius, s));
    return best;
}

double SpaceMap::connectivity(double resolution) const {
    const int nx = static_cast<int>(std::ceil((hi_.x - lo_.x) / resolution));
    const int ny = static_cast<int>(std::ceil((hi_.y - lo_.y) / resolution));
    const double half_diag = resolution * std::sqrt(0.5);
    std::vector<char> free(static_cast<std::size_t>(nx) * ny, 0);
    std::size_t n_free = 0;
    int first = -1;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const Vec2 c{lo_.x + (i + 0.5) * resolution, lo_.y + (j + 0.5) * resolution};
            if (min_clearance(c) > half_diag) {
                free[j * nx + i] = 1;
                ++n_free;
                if (first < 0) first = j * nx + i;
            }
        }
    }
    if (n_free == 0) return 0.0;
    std::vector<char> seen(free.size(), 0);
    std::deque<int> queue{first};
    seen[first] = 1;
    std::size_t reached = 0;
    while (!queue.empty()) {
        const int c = queue.front();
        queue.pop_front();
        ++reached;
        const int ci = c % nx, cj = c / nx;
        const int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (const auto& d : nb) {
            const int i = ci + d[0], j = cj + d[1];
            if (i < 0 || j < 0 || i >= nx || j >= ny) continue;
            const int k = j * nx + i;
            if (free[k] && !seen[k]) {
                seen[k] = 1;
                queue.push_back(k);
            }
        }
    }
    return static_cast<double>(reached) / static_cast<double>(n_free);
}

}  // namespace frdw
