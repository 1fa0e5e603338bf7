#include "frdw/predictor.hpp"

#include <cmath>
#include <stdexcept>

namespace frdw {

namespace {

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }
double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Inverse Mills ratio phi(a) / (1 - Phi(a)) for truncation point a.
double mills(double a) {
    const double tail = Phi(-a);
    if (tail < 1e-300) return a;  // asymptote
    return phi(a) / tail;
}

/// Coefficient of variation of N(r, 1) truncated at 0.
double truncated_cv(double r) {
    const double a = -r, lam = mills(a);
    return std::sqrt(std::max(0.0, 1.0 + a * lam - lam * lam)) / (r + lam);
}

}  // namespace

DirectionProbs DirectionProbs::polarized(Direction d, double p) {
    const double q = 0.5 * (1.0 - p);
    DirectionProbs out{q, q, q};
    switch (d) {
        case Direction::forward: out.forward = p; break;
        case Direction::left: out.left = p; break;
        case Direction::right: out.right = p; break;
    }
    return out;
}

double DirectionProbs::operator[](Direction d) const {
    switch (d) {
        case Direction::forward: return forward;
        case Direction::left: return left;
        case Direction::right: return right;
    }
    return 0.0;
}

ErrorMagnitude::ErrorMagnitude(const NoiseModel& noise) : mean_(noise.mde_mean), sd_(noise.mde_sd) {
    if (mean_ < 0.0 || sd_ < 0.0) throw std::invalid_argument("NoiseModel: negative moment");
    if (mean_ == 0.0 || sd_ == 0.0) return;  // degenerate: constant magnitude
    const double cv = sd_ / mean_;
    if (cv >= 1.0) throw std::invalid_argument("NoiseModel: mde_sd must be below mde_mean for a truncated normal");
    // truncated_cv is decreasing in r = loc / scale; bracket then bisect.
    double lo = -50.0, hi = 50.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (truncated_cv(mid) > cv ? lo : hi) = mid;
    }
    const double r = 0.5 * (lo + hi);
    scale_ = mean_ / (r + mills(-r));
    loc_ = r * scale_;
}

double ErrorMagnitude::sample(Rng& rng) const {
    if (scale_ == 0.0) return mean_;
    double x;
    do x = rng.normal(loc_, scale_); while (x < 0.0);
    return x;
}

double ErrorMagnitude::cdf(double x) const {
    if (scale_ == 0.0) return x >= mean_ ? 1.0 : 0.0;
    if (x <= 0.0) return 0.0;
    const double z0 = Phi(-loc_ / scale_);
    return (Phi((x - loc_) / scale_) - z0) / (1.0 - z0);
}

Vec2 project_into_boundary(const Vec2& p, const SpaceMap& space, double inset) {
    // Boundaries are convex: push along inward normals of violated edges.
    Vec2 q = p;
    const Polygon& b = space.boundary();
    for (int pass = 0; pass < 3; ++pass) {
        bool moved = false;
        for (std::size_t i = 0; i < b.size(); ++i) {
            const Segment e = b.edge(i);
            const Vec2 n = e.direction().perp().normalized();  // inward for CCW
            const double sd = (q - e.a).dot(n);
            if (sd < inset) {
                q += n * (inset - sd);
                moved = true;
            }
        }
        if (!moved) break;
    }
    return q;
}

Prediction predict_position_oracle(const PlannedPath& path, const UserState& u, const UserParams& params,
                                   double f_t, const ErrorMagnitude& noise, Rng& rng, const SpaceMap& vspace) {
    if (!(f_t > 0.0)) throw std::invalid_argument("predict_position_oracle: F_t must be positive");
    return predict_position_with_error(path, u, params, f_t, draw_error(noise, rng), vspace);
}

Vec2 draw_error(const ErrorMagnitude& noise, Rng& rng) {
    const double mag = noise.sample(rng);
    const double dir = rng.uniform(-kPi, kPi);
    return Vec2::from_angle(dir) * mag;
}

Prediction predict_position_with_error(const PlannedPath& path, const UserState& u, const UserParams& params,
                                       double f_t, const Vec2& error, const SpaceMap& vspace) {
    if (!(f_t > 0.0)) throw std::invalid_argument("predict_position_oracle: F_t must be positive");
    const Vec2 truth = future_point_on_plan(path, u, params, f_t);
    return {project_into_boundary(truth + error, vspace, 1e-6), f_t};
}

Prediction predict_position_cv(const UserState& u, const Vec2& recent_velocity, double f_t, const SpaceMap& vspace) {
    if (!(f_t > 0.0)) throw std::invalid_argument("predict_position_cv: F_t must be positive");
    return {project_into_boundary(u.virtual_pose.position + recent_velocity * f_t, vspace, 1e-6), f_t};
}

Direction classify_bearing(double bearing) {
    constexpr double quarter = kPi / 4.0;
    if (std::abs(bearing) <= quarter) return Direction::forward;
    return bearing > 0.0 ? Direction::left : Direction::right;
}

DirectionDraw draw_direction(const PlannedPath& path, const UserState& u, const UserParams& params, double f_t,
                             double accuracy, Rng& rng, double polarization) {
    if (!(accuracy > 1.0 / 3.0 && accuracy <= 1.0))
        throw std::invalid_argument("predict_direction_probs: accuracy must be in (1/3, 1]");
    const Vec2 d = future_point_on_plan(path, u, params, f_t) - u.virtual_pose.position;
    const Direction truth =
        d.norm() < 1e-9 ? Direction::forward : classify_bearing(wrap_angle(d.angle() - u.virtual_pose.heading));
    Direction reported = truth;
    if (rng.uniform() >= accuracy) {
        const int shift = rng.uniform() < 0.5 ? 1 : 2;
        reported = static_cast<Direction>((static_cast<int>(truth) + shift) % 3);
    }
    return {DirectionProbs::polarized(reported, polarization), truth, reported};
}

}  // namespace frdw
