#pragma once
/**
 * @file predictor.hpp
 * @brief Future-information sources: a noise-calibrated oracle over the agent's
 * own plan, a constant-velocity baseline, and a 3-way direction classifier.
 */

#include <array>

#include "frdw/agent.hpp"
#include "frdw/rng.hpp"

namespace frdw {

struct Prediction {
    Vec2 future_virtual_position;
    double horizon = 1.0;  ///< F_t, seconds
};

enum class Direction { forward = 0, left = 1, right = 2 };

struct DirectionProbs {
    double forward = 1.0 / 3.0;
    double left = 1.0 / 3.0;
    double right = 1.0 / 3.0;

    static DirectionProbs uniform() { return {}; }
    /// `p` on the given class, (1 - p) / 2 on each of the others.
    static DirectionProbs polarized(Direction d, double p);
    double operator[](Direction d) const;
    bool operator==(const DirectionProbs&) const = default;
};

/// Target moments of the displacement-error magnitude.
struct NoiseModel {
    double mde_mean = 0.45;
    double mde_sd = 0.35;
};

/// Normal(loc, scale) truncated to [0, inf), parameterized so that the truncated
/// distribution has the requested mean and standard deviation.
class ErrorMagnitude {
 public:
    explicit ErrorMagnitude(const NoiseModel& noise);

    double sample(Rng& rng) const;
    double cdf(double x) const;
    double loc() const { return loc_; }
    double scale() const { return scale_; }
    double mean() const { return mean_; }
    double sd() const { return sd_; }

 private:
    double mean_;
    double sd_;
    double loc_ = 0.0;
    double scale_ = 0.0;
};

Prediction predict_position_oracle(const PlannedPath& path, const UserState& u, const UserParams& params,
                                   double f_t, const ErrorMagnitude& noise, Rng& rng, const SpaceMap& vspace);

/// Error vector with ErrorMagnitude-distributed length and uniform direction.
Vec2 draw_error(const ErrorMagnitude& noise, Rng& rng);

/// Plan-based future point displaced by a given error vector, kept inside the boundary.
Prediction predict_position_with_error(const PlannedPath& path, const UserState& u, const UserParams& params,
                                       double f_t, const Vec2& error, const SpaceMap& vspace);

Prediction predict_position_cv(const UserState& u, const Vec2& recent_velocity, double f_t, const SpaceMap& vspace);

/// forward when |bearing| <= 45 deg, left above, right below.
Direction classify_bearing(double bearing);

struct DirectionDraw {
    DirectionProbs probs;
    Direction true_class = Direction::forward;
    Direction reported = Direction::forward;
};

DirectionDraw draw_direction(const PlannedPath& path, const UserState& u, const UserParams& params, double f_t,
                             double accuracy, Rng& rng, double polarization = 0.77);

inline DirectionProbs predict_direction_probs(const PlannedPath& path, const UserState& u, const UserParams& params,
                                              double f_t, double accuracy, Rng& rng, double polarization = 0.77) {
    return draw_direction(path, u, params, f_t, accuracy, rng, polarization).probs;
}

/// Moves p inside the boundary so its boundary clearance is at least `inset`.
Vec2 project_into_boundary(const Vec2& p, const SpaceMap& space, double inset);

}  // namespace frdw
