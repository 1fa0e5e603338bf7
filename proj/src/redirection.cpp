#include "frdw/redirection.hpp"

#include <algorithm>
#include <cmath>

namespace frdw {

Gains Gains::with_curvature(double k, double gt, double gr) {
    Gains g{gt, gr, kInf, 0};
    if (k != 0.0) {
        g.curvature_sign = k > 0.0 ? 1 : -1;
        g.curvature_radius = 1.0 / std::abs(k);
    }
    return g;
}

Gains clamp_gains(const Gains& g, const GainLimits& lim) {
    Gains out = g;
    out.gt = std::clamp(g.gt, lim.gt_min, lim.gt_max);
    out.gr = std::clamp(g.gr, lim.gr_min, lim.gr_max);
    if (g.curvature_sign == 0) {
        out.curvature_radius = kInf;
    } else if (!(g.curvature_radius >= lim.min_curvature_radius)) {
        out.curvature_radius = lim.min_curvature_radius;
    }
    out.curvature_sign = std::clamp(g.curvature_sign, -1, 1);
    return out;
}

bool within_limits(const Gains& g, const GainLimits& lim) { return clamp_gains(g, lim) == g; }

UserState apply_redirection(const UserState& u, double dv, double dtheta_v, const Gains& g, double dt) {
    UserState n = u;
    n.virtual_pose.heading = wrap_angle(u.virtual_pose.heading + dtheta_v);
    n.virtual_pose.position = u.virtual_pose.position + n.virtual_pose.forward() * dv;

    const double ds = dv / g.gt;
    const double bend = g.curvature() * ds;
    const double h0 = u.physical_pose.heading + dtheta_v / g.gr;
    // Exact circular-arc chord: length 2 r sin(bend/2) along the mid-arc heading.
    const double chord = std::abs(bend) < 1e-12 ? ds : 2.0 * std::sin(0.5 * bend) / g.curvature();
    n.physical_pose.position = u.physical_pose.position + Vec2::from_angle(h0 + 0.5 * bend) * chord;
    n.physical_pose.heading = wrap_angle(h0 + bend);

    if (dt > 0.0) {
        n.linear_speed = dv / dt;
        n.angular_velocity = dtheta_v / dt;
    }
    return n;
}

bool check_reset(const UserState& u, const SpaceMap& physical) {
    return physical.min_clearance(u.physical_pose.position) <= u.body_radius;
}

std::pair<UserState, ResetEvent> execute_reset(const UserState& u, const SpaceMap& physical, double time,
                                               double virtual_distance, const ResetParams& params) {
    const Vec2 pos = u.physical_pose.position;
    const double range = 1e3;
    UserState n = u;
    const Vec2 to_center = physical.center() - pos;
    bool done = false;
    if (to_center.norm() > kGeomEps) {
        const Vec2 dir = to_center.normalized();
        if (physical.sweep(pos, dir, u.body_radius, range) > params.blocked_range) {
            n.physical_pose.heading = wrap_angle(dir.angle());
            done = true;
        }
    }
    if (!done) {
        double best = -1.0, best_turn = kInf, best_heading = 0.0;
        for (int i = 0; i < params.directions; ++i) {
            const double heading = wrap_angle(-kPi + (2.0 * kPi * i) / params.directions);
            const double free = physical.sweep(pos, Vec2::from_angle(heading), u.body_radius, range);
            const double turn = std::abs(wrap_angle(heading - u.physical_pose.heading));
            if (free > best + kGeomEps || (std::abs(free - best) <= kGeomEps && turn < best_turn - kGeomEps)) {
                best = free;
                best_turn = turn;
                best_heading = heading;
            }
        }
        if (best <= kGeomEps) throw UnrecoverablePoseError("execute_reset: no free direction");
        n.physical_pose.heading = best_heading;
    }
    return {n, ResetEvent{time, pos, virtual_distance}};
}

void ResetLog::record(const ResetEvent& e) {
    if (!events_.empty() && e.time < events_.back().time)
        throw std::logic_error("ResetLog: events must be time-ordered");
    events_.push_back(e);
}

}  // namespace frdw
