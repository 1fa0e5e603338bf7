#include "frdw/geometry.hpp"

#include <algorithm>
#include <limits>

namespace frdw {

Vec2 closest_point_on_segment(const Vec2& p, const Segment& s) {
    const Vec2 d = s.b - s.a;
    const double t = std::clamp((p - s.a).dot(d) / d.norm2(), 0.0, 1.0);
    return s.a + d * t;
}

double distance_point_segment(const Vec2& p, const Segment& s) {
    return distance(p, closest_point_on_segment(p, s));
}

namespace {

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double v = (b - a).cross(c - a);
    if (v > kGeomEps) return 1;
    if (v < -kGeomEps) return -1;
    return 0;
}

bool on_segment(const Vec2& p, const Segment& s) {
    return std::min(s.a.x, s.b.x) - kGeomEps <= p.x && p.x <= std::max(s.a.x, s.b.x) + kGeomEps &&
           std::min(s.a.y, s.b.y) - kGeomEps <= p.y && p.y <= std::max(s.a.y, s.b.y) + kGeomEps;
}

}  // namespace

bool segments_intersect(const Segment& s, const Segment& t) {
    const int o1 = orientation(s.a, s.b, t.a);
    const int o2 = orientation(s.a, s.b, t.b);
    const int o3 = orientation(t.a, t.b, s.a);
    const int o4 = orientation(t.a, t.b, s.b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(t.a, s)) return true;
    if (o2 == 0 && on_segment(t.b, s)) return true;
    if (o3 == 0 && on_segment(s.a, t)) return true;
    if (o4 == 0 && on_segment(s.b, t)) return true;
    return false;
}

double distance_segment_segment(const Segment& s, const Segment& t) {
    if (segments_intersect(s, t)) return 0.0;
    return std::min({distance_point_segment(s.a, t), distance_point_segment(s.b, t),
                     distance_point_segment(t.a, s), distance_point_segment(t.b, s)});
}

std::optional<double> ray_segment_hit(const Vec2& origin, const Vec2& dir, const Segment& s) {
    const Vec2 e = s.b - s.a;
    const double denom = dir.cross(e);
    const Vec2 w = s.a - origin;
    if (std::abs(denom) <= kGeomEps * e.norm()) {
        // Parallel: only a collinear overlap counts, hit at the nearest endpoint ahead.
        if (std::abs(w.cross(dir)) > kGeomEps) return std::nullopt;
        const double ta = w.dot(dir);
        const double tb = (s.b - origin).dot(dir);
        if (ta < -kGeomEps && tb < -kGeomEps) return std::nullopt;
        if (ta * tb <= 0.0) return 0.0;
        return std::min(ta, tb);
    }
    const double t = w.cross(e) / denom;
    const double u = w.cross(dir) / denom;
    if (t < -kGeomEps || u < -kGeomEps || u > 1.0 + kGeomEps) return std::nullopt;
    return std::max(t, 0.0);
}

double disc_sweep_hit(const Vec2& origin, const Vec2& dir, double radius, const Segment& s) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const Vec2 c = closest_point_on_segment(origin, s);
    const Vec2 away = origin - c;
    if (away.norm() <= radius) {
        // Distance along a ray to a convex set is convex, so it never shrinks
        // once it starts growing.
        if (away.norm() <= kGeomEps) return 0.0;
        return dir.dot(away) < 0.0 ? 0.0 : inf;
    }
    double best = inf;
    for (const Vec2& end : {s.a, s.b}) {
        const Vec2 w = origin - end;
        const double b = w.dot(dir);
        const double disc = b * b - (w.norm2() - radius * radius);
        if (disc < 0.0) continue;
        const double t = -b - std::sqrt(disc);
        if (t >= 0.0) best = std::min(best, t);
    }
    const Vec2 n = (s.b - s.a).normalized().perp() * radius;
    for (const Vec2& off : {n, -n}) {
        if (auto t = ray_segment_hit(origin, dir, Segment{s.a + off, s.b + off})) best = std::min(best, *t);
    }
    return best;
}

Polygon::Polygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) throw GeometryError("Polygon: needs at least 3 vertices");
    for (const auto& v : vertices_)
        if (!v.finite()) throw GeometryError("Polygon: non-finite vertex");
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i)
        if (vertices_[i] == vertices_[(i + 1) % n]) throw GeometryError("Polygon: repeated vertex");
    // Simplicity: non-adjacent edges must not touch.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(edge(i), edge(j))) throw GeometryError("Polygon: self-intersecting");
        }
    }
    const double area = signed_area();
    if (std::abs(area) <= kGeomEps) throw GeometryError("Polygon: zero area");
    if (area < 0.0) std::reverse(vertices_.begin(), vertices_.end());
}

Polygon Polygon::rectangle(Vec2 center, double width, double height, double angle) {
    const Vec2 u = Vec2::from_angle(angle) * (0.5 * width);
    const Vec2 v = Vec2::from_angle(angle).perp() * (0.5 * height);
    return Polygon({center - u - v, center + u - v, center + u + v, center - u + v});
}

std::vector<Segment> Polygon::edges() const {
    std::vector<Segment> out;
    out.reserve(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) out.push_back(edge(i));
    return out;
}

double Polygon::signed_area() const {
    double a = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        a += vertices_[i].cross(vertices_[(i + 1) % vertices_.size()]);
    return 0.5 * a;
}

Vec2 Polygon::centroid() const {
    Vec2 c;
    double a = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const Vec2& p = vertices_[i];
        const Vec2& q = vertices_[(i + 1) % vertices_.size()];
        const double w = p.cross(q);
        a += w;
        c += (p + q) * w;
    }
    return c / (3.0 * a);
}

bool Polygon::contains(const Vec2& p) const {
    const std::size_t n = vertices_.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = vertices_[i];
        const Vec2& b = vertices_[j];
        if (distance_point_segment(p, Segment(b, a)) <= kGeomEps) return true;
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

bool point_in_polygon(const Vec2& p, const Polygon& poly) { return poly.contains(p); }

double distance_point_polygon_boundary(const Vec2& p, const Polygon& poly) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) d = std::min(d, distance_point_segment(p, poly.edge(i)));
    return d;
}

double distance_polygon_polygon(const Polygon& a, const Polygon& b) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            d = std::min(d, distance_segment_segment(a.edge(i), b.edge(j)));
    return d;
}

}  // namespace frdw
