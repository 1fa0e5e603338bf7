#pragma once
/**
 * @file geometry.hpp
 * @brief Exact 2D primitives shared by every part of the simulator.
 *
 * All quantities are meters / radians in double precision. Intersection
 * predicates use a fixed tolerance of 1e-9, which leaves ample margin for
 * scenes no larger than a few tens of meters.
 */

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace frdw {

inline constexpr double kGeomEps = 1e-9;
inline constexpr double kPi = 3.14159265358979323846;

class GeometryError : public std::invalid_argument {
 public:
    using std::invalid_argument::invalid_argument;
};

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double X, double Y) : x(X), y(Y) {}

    /// Checked construction for values coming from outside the library.
    static Vec2 make(double X, double Y) {
        if (!std::isfinite(X) || !std::isfinite(Y)) throw GeometryError("Vec2: non-finite component");
        return {X, Y};
    }
    static Vec2 from_angle(double a) { return {std::cos(a), std::sin(a)}; }

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    friend constexpr Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }
    Vec2& operator+=(const Vec2& r) { x += r.x; y += r.y; return *this; }
    Vec2& operator-=(const Vec2& r) { x -= r.x; y -= r.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
    constexpr bool operator==(const Vec2&) const = default;

    constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }
    /// z-component of the 3D cross product; positive when r is counter-clockwise of *this.
    constexpr double cross(const Vec2& r) const { return x * r.y - y * r.x; }
    double norm() const { return std::hypot(x, y); }
    constexpr double norm2() const { return x * x + y * y; }
    double angle() const { return std::atan2(y, x); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }

    /// Unit vector, or {0,0} when the norm is at or below eps.
    Vec2 normalized(double eps = 1e-12) const {
        const double n = norm();
        return n <= eps ? Vec2{} : Vec2{x / n, y / n};
    }
    Vec2 rotated(double a) const {
        const double c = std::cos(a), s = std::sin(a);
        return {c * x - s * y, s * x + c * y};
    }
    constexpr Vec2 perp() const { return {-y, x}; }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

/// Signed angle turning `from` onto `to` (counter-clockwise positive).
inline double signed_angle(const Vec2& from, const Vec2& to) {
    return std::atan2(from.cross(to), from.dot(to));
}

struct Segment {
    Vec2 a;
    Vec2 b;

    Segment(Vec2 A, Vec2 B) : a(A), b(B) {
        if (A == B) throw GeometryError("Segment: degenerate (a == b)");
    }
    Vec2 direction() const { return b - a; }
    double length() const { return (b - a).norm(); }
};

Vec2 closest_point_on_segment(const Vec2& p, const Segment& s);
double distance_point_segment(const Vec2& p, const Segment& s);

/// Proper or touching intersection test (collinear overlap counts).
bool segments_intersect(const Segment& s, const Segment& t);
double distance_segment_segment(const Segment& s, const Segment& t);

/// Distance along a unit-direction ray to the segment, if hit.
std::optional<double> ray_segment_hit(const Vec2& origin, const Vec2& dir, const Segment& s);

/// Travel along unit `dir` before a disc of `radius` centred at origin touches s.
/// A disc already touching s is blocked (0) only if it starts moving closer.
/// Infinity when the disc never touches s.
double disc_sweep_hit(const Vec2& origin, const Vec2& dir, double radius, const Segment& s);

/// Simple polygon stored counter-clockwise. Clockwise input is reversed.
class Polygon {
 public:
    explicit Polygon(std::vector<Vec2> vertices);

    static Polygon rectangle(Vec2 center, double width, double height, double angle = 0.0);
    static Polygon axis_square(Vec2 center, double side) { return rectangle(center, side, side); }

    std::span<const Vec2> vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    Segment edge(std::size_t i) const { return {vertices_[i], vertices_[(i + 1) % vertices_.size()]}; }
    std::vector<Segment> edges() const;
    double signed_area() const;
    Vec2 centroid() const;

    /// Boundary-inclusive containment.
    bool contains(const Vec2& p) const;

    bool operator==(const Polygon& o) const { return vertices_ == o.vertices_; }

 private:
    std::vector<Vec2> vertices_;
};

bool point_in_polygon(const Vec2& p, const Polygon& poly);
double distance_point_polygon_boundary(const Vec2& p, const Polygon& poly);
/// Minimum distance between polygon outlines (0 when they touch or cross).
double distance_polygon_polygon(const Polygon& a, const Polygon& b);

}  // namespace frdw
