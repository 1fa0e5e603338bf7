#include "frdw/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace frdw {

std::string_view to_string(MpcAction a) {
    switch (a) {
        case MpcAction::none: return "none";
        case MpcAction::curvature_left: return "left";
        case MpcAction::curvature_right: return "right";
    }
    return "?";
}

FusionWeight::FusionWeight(double m) : mu(m) {
    if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("mu must be in [0, 1]");
}

namespace {

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

Gains finish(Gains g, const ControllerParams& p) { return clamp_gains(g, p.limits); }

Gains curvature_gains(double signed_curvature, double gt, double gr, const ControllerParams& p) {
    Gains g{gt, gr, kInf, 0};
    if (signed_curvature != 0.0) {
        g.curvature_sign = sign_of(signed_curvature);
        g.curvature_radius = std::max(1.0 / std::abs(signed_curvature), p.limits.min_curvature_radius);
    }
    return finish(g, p);
}

Vec2 push_out_of_obstacles(Vec2 q, const SpaceMap& physical, double inset) {
    for (const Polygon& o : physical.obstacles()) {
        const bool inside = o.contains(q);
        if (!inside && distance_point_polygon_boundary(q, o) >= inset) continue;
        Vec2 best;
        double best_d = kInf;
        for (std::size_t i = 0; i < o.size(); ++i) {
            const Vec2 c = closest_point_on_segment(q, o.edge(i));
            if (const double d = distance(q, c); d < best_d) {
                best_d = d;
                best = c;
            }
        }
        Vec2 out = inside ? best - q : q - best;
        if (out.norm() < 1e-12) out = q - o.centroid();
        q = best + out.normalized() * inset;
    }
    return q;
}

}  // namespace

SteeringDecision steer_to_target(const UserState& u, const Vec2& target_dir, const ControllerParams& p) {
    SteeringDecision d;
    d.steer_direction = target_dir;
    if (target_dir.norm() < 1e-12) {
        d.gains = finish({}, p);
        return d;
    }
    const double angle = signed_angle(u.physical_pose.forward(), target_dir);
    const bool aligned = std::abs(angle) < p.dead_zone;
    const double k_max = 1.0 / p.limits.min_curvature_radius;
    double gr = 1.0;
    const int turning = sign_of(u.angular_velocity);
    if (turning != 0 && !aligned) {
        // Physical rotation is dtheta / g_r: amplify turns toward the target, damp turns away.
        gr = turning == sign_of(angle) ? p.limits.gr_min : p.limits.gr_max;
    }
    d.gains = curvature_gains(aligned ? 0.0 : sign_of(angle) * k_max, 1.0, gr, p);
    return d;
}

Vec2 overlay_future_position(const UserState& u, const Prediction& pred, const SpaceMap& physical) {
    const double offset = u.physical_pose.heading - u.virtual_pose.heading;
    const Vec2 disp = (pred.future_virtual_position - u.virtual_pose.position).rotated(offset);
    Vec2 q = u.physical_pose.position + disp;
    q = project_into_boundary(q, physical, u.body_radius);
    return push_out_of_obstacles(q, physical, u.body_radius);
}

SteeringDecision s2c(const UserState& u, const SpaceMap& physical, const ControllerParams& p) {
    return steer_to_target(u, (physical.center() - u.physical_pose.position).normalized(), p);
}

SteeringDecision f_s2c(const UserState& u, const Prediction& pred, FusionWeight mu, const SpaceMap& physical,
                       const ControllerParams& p) {
    const Vec2 future = overlay_future_position(u, pred, physical);
    const Vec2 d_c = physical.center() - u.physical_pose.position;
    const Vec2 d_f = physical.center() - future;
    const Vec2 r = d_f * mu.mu + d_c * (1.0 - mu.mu);
    SteeringDecision d = steer_to_target(u, r.normalized(), p);
    d.overlay = future;
    return d;
}

Vec2 compute_tapf_force(const Vec2& p, const SpaceMap& physical, double spacing) {
    Vec2 force;
    for (const Segment& e : physical.edges()) {
        const double len = e.length();
        const int n = std::max(1, static_cast<int>(std::ceil(len / spacing - 1e-9)));
        const double h = len / n;
        const Vec2 step = e.direction() / static_cast<double>(n);
        for (int k = 0; k < n; ++k) {
            const Vec2 s = e.a + step * (k + 0.5);
            const Vec2 v = p - s;
            const double d2 = v.norm2();
            if (d2 < 1e-18) continue;
            force += v * (h / (d2 * std::sqrt(d2)));
        }
    }
    return force;
}

SteeringDecision f_tapf(const UserState& u, const Prediction& pred, FusionWeight mu, const SpaceMap& physical,
                        const ControllerParams& p) {
    const Vec2 future = overlay_future_position(u, pred, physical);
    const Vec2 force_c = compute_tapf_force(u.physical_pose.position, physical, p.tapf_spacing);
    const Vec2 force_f = compute_tapf_force(future, physical, p.tapf_spacing);
    const Vec2 net = force_f * mu.mu + force_c * (1.0 - mu.mu);
    SteeringDecision d;
    if (net.norm() < 1e-9) {
        d.gains = finish({}, p);
    } else {
        d = steer_to_target(u, net.normalized(), p);
        if (u.linear_speed > 0.0) {
            // Slow physical approach when walking against the force, speed up along it.
            d.gains.gt = u.physical_pose.forward().dot(net) < 0.0 ? p.limits.gt_max : p.limits.gt_min;
            d.gains = finish(d.gains, p);
        }
    }
    d.force = net;
    d.overlay = future;
    return d;
}

SteeringDecision tapf(const UserState& u, const SpaceMap& physical, const ControllerParams& p) {
    return f_tapf(u, Prediction{u.virtual_pose.position, 1.0}, FusionWeight(0.0), physical, p);
}

Misalignment compute_misalign(const Pose& vp, const Pose& pp, const SpaceMap& vspace, const SpaceMap& pspace,
                              double range) {
    Misalignment m;
    const double offsets[3] = {0.0, kPi / 2.0, -kPi / 2.0};
    for (int i = 0; i < 3; ++i) {
        m.physical[i] = pspace.raycast(pp.position, Vec2::from_angle(pp.heading + offsets[i]), range).value_or(0.0);
        m.virtual_[i] = vspace.raycast(vp.position, Vec2::from_angle(vp.heading + offsets[i]), range).value_or(0.0);
        m.ml += std::abs(m.physical[i] - m.virtual_[i]);
    }
    return m;
}

ArcGains arc_gains(const Misalignment& m, const ControllerParams& p) {
    ArcGains g;
    const double dv = std::max(m.virtual_[0], p.arc_distance_floor);
    const double dp = std::max(m.physical[0], p.arc_distance_floor);
    g.gt = std::clamp(dv / dp, p.limits.gt_min, p.limits.gt_max);
    const double diff_left = std::abs(m.physical[1] - m.virtual_[1]);
    const double diff_right = std::abs(m.physical[2] - m.virtual_[2]);
    const int side = diff_left < diff_right ? 1 : (diff_right < diff_left ? -1 : 0);
    const double k_max = 1.0 / p.limits.min_curvature_radius;
    g.curvature = side * k_max * std::min(1.0, m.ml / p.arc_saturation);
    return g;
}

namespace {

struct ArcCore {
    ArcGains current;
    Misalignment mis_c;
};

ArcCore arc_current(const UserState& u, const SpaceMap& vspace, const SpaceMap& pspace, const ControllerParams& p) {
    ArcCore c;
    c.mis_c = compute_misalign(u.virtual_pose, u.physical_pose, vspace, pspace, p.arc_range);
    c.current = arc_gains(c.mis_c, p);
    return c;
}

}  // namespace

SteeringDecision f_arc(const UserState& u, const Prediction& pred, FusionWeight mu, const SpaceMap& vspace,
                       const SpaceMap& pspace, const ControllerParams& p) {
    const ArcCore c = arc_current(u, vspace, pspace, p);
    const Vec2 up_f = overlay_future_position(u, pred, pspace);
    const double sgn = p.arc_future_orientation_from_algorithm ? -1.0 : 1.0;
    const Vec2 dv_dir = (pred.future_virtual_position - u.virtual_pose.position) * sgn;
    const Vec2 dp_dir = (up_f - u.physical_pose.position) * sgn;
    const Pose v_future{pred.future_virtual_position,
                        dv_dir.norm() > 1e-9 ? dv_dir.angle() : u.virtual_pose.heading};
    const Pose p_future{up_f, dp_dir.norm() > 1e-9 ? dp_dir.angle() : u.physical_pose.heading};
    const Misalignment mis_f = compute_misalign(v_future, p_future, vspace, pspace, p.arc_range);
    const ArcGains fut = arc_gains(mis_f, p);

    const double gt = fut.gt * mu.mu + c.current.gt * (1.0 - mu.mu);
    const double k = fut.curvature * mu.mu + c.current.curvature * (1.0 - mu.mu);

    const Vec2 to_future = up_f - u.physical_pose.position;
    const int turning = sign_of(u.angular_velocity);
    const bool toward = turning != 0 && to_future.norm() > 1e-9 &&
                        turning == sign_of(signed_angle(u.physical_pose.forward(), to_future));
    const bool worse_now = c.mis_c.ml > mis_f.ml;
    double gr;
    if (toward)
        gr = worse_now ? p.limits.gr_min : p.limits.gr_max;
    else
        gr = worse_now ? p.limits.gr_max : p.limits.gr_min;

    SteeringDecision d;
    d.gains = curvature_gains(k, gt, gr, p);
    d.ml_current = c.mis_c.ml;
    d.ml_future = mis_f.ml;
    d.overlay = up_f;
    return d;
}

SteeringDecision arc(const UserState& u, std::optional<double> previous_ml, const SpaceMap& vspace,
                     const SpaceMap& pspace, const ControllerParams& p) {
    const ArcCore c = arc_current(u, vspace, pspace, p);
    double gr = 1.0;
    if (previous_ml && u.angular_velocity != 0.0) {
        if (c.mis_c.ml < *previous_ml)
            gr = p.limits.gr_min;
        else if (c.mis_c.ml > *previous_ml)
            gr = p.limits.gr_max;
    }
    SteeringDecision d;
    d.gains = curvature_gains(c.current.curvature, c.current.gt, gr, p);
    d.ml_current = c.mis_c.ml;
    return d;
}

// ---- MPCRed ---------------------------------------------------------------------

Gains mpc_action_gains(MpcAction a, const ControllerParams& p) {
    const double k = 1.0 / p.limits.min_curvature_radius;
    switch (a) {
        case MpcAction::none: return finish({}, p);
        case MpcAction::curvature_left: return curvature_gains(k, 1.0, 1.0, p);
        case MpcAction::curvature_right: return curvature_gains(-k, 1.0, 1.0, p);
    }
    return {};
}

namespace {

constexpr MpcAction kActions[3] = {MpcAction::none, MpcAction::curvature_left, MpcAction::curvature_right};
constexpr Direction kHypotheses[3] = {Direction::forward, Direction::left, Direction::right};

struct PhysState {
    Vec2 pos;
    Vec2 dir;  ///< unit heading
};

struct StageOut {
    PhysState next;
    StageCost cost;
    double walked = 0.0;
};

// Trig-free rollout model shared by the search and the public APPLY.
class MpcModel {
 public:
    MpcModel(const SpaceMap& physical, double radius, const ControllerParams& p)
        : physical_(physical), radius_(radius), p_(p) {
        for (const Segment& e : physical.edges()) {
            const Vec2 d = e.b - e.a;
            edges_.push_back({e.a, d, 1.0 / d.norm2()});
        }
        steps_ = std::max(1, static_cast<int>(std::lround(p.mpc_segment_length / p.mpc_sample_step)));
        step_ = p.mpc_segment_length / steps_;
        // Clearance by unsigned edge distance is exact while a step cannot jump
        // across a wall from outside the contact radius.
        exact_edges_ = step_ < radius;
        for (int i = 0; i < 3; ++i) {
            const double k = mpc_action_gains(kActions[i], p).curvature();
            const double bend = k * step_;
            const double chord = std::abs(bend) < 1e-12 ? step_ : 2.0 * std::sin(0.5 * bend) / k;
            half_[i] = Vec2::from_angle(0.5 * bend) * chord;
            full_[i] = Vec2::from_angle(bend);
        }
    }

    StageOut apply(const PhysState& s, MpcAction a, Direction h) const {
        const int ai = static_cast<int>(a);
        StageOut r;
        Vec2 dir = s.dir;
        if (h == Direction::left) dir = dir.perp();
        if (h == Direction::right) dir = -dir.perp();
        Vec2 pos = s.pos;
        for (int i = 0; i < steps_; ++i) {
            pos += rotate(dir, half_[ai]);
            dir = rotate(dir, full_[ai]);
            r.walked += step_;
            const double c = clearance(pos);
            r.cost.proximity += std::max(0.0, 1.0 - c / p_.mpc_proximity_range) * step_;
            if (c <= radius_) {
                r.cost.reset = true;
                const Vec2 to_center = physical_.center() - pos;
                if (to_center.norm() > 1e-12) dir = to_center.normalized();
                break;
            }
        }
        r.next = {pos, dir};
        r.cost.action = a == MpcAction::none ? 0.0 : p_.mpc_action_cost;
        r.cost.total = (r.cost.reset ? p_.mpc_reset_cost : 0.0) + r.cost.proximity + r.cost.action;
        return r;
    }

 private:
    struct EdgeRec {
        Vec2 a;
        Vec2 d;
        double inv_len2;
    };

    static Vec2 rotate(const Vec2& v, const Vec2& cs) { return {v.x * cs.x - v.y * cs.y, v.x * cs.y + v.y * cs.x}; }

    double clearance(const Vec2& q) const {
        if (!exact_edges_) return physical_.min_clearance(q);
        double best = kInf;
        for (const EdgeRec& e : edges_) {
            const Vec2 w = q - e.a;
            const double t = std::clamp(w.dot(e.d) * e.inv_len2, 0.0, 1.0);
            best = std::min(best, (w - e.d * t).norm2());
        }
        return std::sqrt(best);
    }

    const SpaceMap& physical_;
    double radius_;
    const ControllerParams& p_;
    std::vector<EdgeRec> edges_;
    int steps_ = 1;
    double step_ = 1.0;
    bool exact_edges_ = true;
    Vec2 half_[3];
    Vec2 full_[3];
};

}  // namespace

StageResult mpc_apply(const UserState& state, MpcAction a, Direction hypothesis, const SpaceMap& physical,
                      const ControllerParams& p) {
    static constexpr double kTurn[3] = {0.0, kPi / 2.0, -kPi / 2.0};
    const MpcModel model(physical, state.body_radius, p);
    const StageOut o = model.apply({state.physical_pose.position, state.physical_pose.forward()}, a, hypothesis);
    StageResult r{state, o.cost};
    r.next.virtual_pose.heading = wrap_angle(state.virtual_pose.heading + kTurn[static_cast<int>(hypothesis)]);
    r.next.virtual_pose.position = state.virtual_pose.position + r.next.virtual_pose.forward() * o.walked;
    r.next.physical_pose = {o.next.pos, o.next.dir.angle()};
    return r;
}

double mpc_stage_cost(const UserState& state, MpcAction a, Direction hypothesis, const SpaceMap& physical,
                      const ControllerParams& p) {
    return mpc_apply(state, a, hypothesis, physical, p).cost.total;
}

namespace {

struct Search {
    const DirectionProbs& gamma;
    const MpcModel& model;
    double alpha;
    const ControllerParams& params;
    bool prune;
    long nodes = 0;

    double action_cost(const PhysState& u, MpcAction a, int k, double best) {
        double cost = 0.0;
        for (Direction h : kHypotheses) {
            const StageOut s = model.apply(u, a, h);
            ++nodes;
            cost += gamma[h] * s.cost.total;
            if (prune && cost >= best) break;
            if (k > 1) cost += alpha * gamma[h] * run(s.next, k - 1, nullptr);
        }
        return cost;
    }

    double run(const PhysState& u, int k, MpcAction* best_action) {
        double best = std::numeric_limits<double>::infinity();
        MpcAction chosen = MpcAction::none;
        for (MpcAction a : kActions) {
            const double lower = a == MpcAction::none ? 0.0 : params.mpc_action_cost;
            if (prune && !(lower < best)) continue;
            const double cost = action_cost(u, a, k, best);
            if (cost < best) {
                best = cost;
                chosen = a;
            }
        }
        if (best_action) *best_action = chosen;
        return best;
    }
};

PhysState phys_of(const UserState& u) { return {u.physical_pose.position, u.physical_pose.forward()}; }

}  // namespace

MpcResult f_mpcred(const UserState& u, const DirectionProbs& gamma, const SpaceMap& physical, int k, double alpha,
                   const ControllerParams& params, bool prune) {
    if (k < 1) throw std::invalid_argument("f_mpcred: depth must be >= 1");
    const MpcModel model(physical, u.body_radius, params);
    Search s{gamma, model, alpha, params, prune};
    MpcResult r;
    r.cost = s.run(phys_of(u), k, &r.action);
    r.nodes = s.nodes;
    return r;
}

std::array<double, 3> mpc_root_costs(const UserState& u, const DirectionProbs& gamma, const SpaceMap& physical,
                                     int k, double alpha, const ControllerParams& params) {
    const MpcModel model(physical, u.body_radius, params);
    Search s{gamma, model, alpha, params, false};
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i)
        out[i] = s.action_cost(phys_of(u), kActions[i], k, std::numeric_limits<double>::infinity());
    return out;
}

// ---- controller objects -----------------------------------------------------------

std::string_view to_string(ControllerKind k) {
    switch (k) {
        case ControllerKind::s2c: return "s2c";
        case ControllerKind::f_s2c: return "f-s2c";
        case ControllerKind::tapf: return "tapf";
        case ControllerKind::f_tapf: return "f-tapf";
        case ControllerKind::arc: return "arc";
        case ControllerKind::f_arc: return "f-arc";
        case ControllerKind::mpcred: return "mpcred";
        case ControllerKind::f_mpcred: return "f-mpcred";
    }
    return "?";
}

ControllerKind controller_from_string(std::string_view s) {
    for (ControllerKind k : {ControllerKind::s2c, ControllerKind::f_s2c, ControllerKind::tapf, ControllerKind::f_tapf,
                             ControllerKind::arc, ControllerKind::f_arc, ControllerKind::mpcred,
                             ControllerKind::f_mpcred})
        if (s == to_string(k)) return k;
    throw std::invalid_argument("unknown controller '" + std::string(s) +
                                "' (expected s2c|f-s2c|tapf|f-tapf|arc|f-arc|mpcred|f-mpcred)");
}

bool is_future_variant(ControllerKind k) {
    return k == ControllerKind::f_s2c || k == ControllerKind::f_tapf || k == ControllerKind::f_arc ||
           k == ControllerKind::f_mpcred;
}

ControllerKind vanilla_of(ControllerKind k) {
    switch (k) {
        case ControllerKind::f_s2c: return ControllerKind::s2c;
        case ControllerKind::f_tapf: return ControllerKind::tapf;
        case ControllerKind::f_arc: return ControllerKind::arc;
        case ControllerKind::f_mpcred: return ControllerKind::mpcred;
        default: return k;
    }
}

ControllerKind future_of(ControllerKind k) {
    switch (k) {
        case ControllerKind::s2c: return ControllerKind::f_s2c;
        case ControllerKind::tapf: return ControllerKind::f_tapf;
        case ControllerKind::arc: return ControllerKind::f_arc;
        case ControllerKind::mpcred: return ControllerKind::f_mpcred;
        default: return k;
    }
}

namespace {

Prediction prediction_or_current(const ControllerFrame& f) {
    return f.prediction ? *f.prediction : Prediction{f.user.virtual_pose.position, 1.0};
}
double effective_mu(const ControllerFrame& f) { return f.prediction ? f.mu : 0.0; }

class S2CController final : public Controller {
 public:
    S2CController(bool future, ControllerParams p) : future_(future), p_(p) {}
    ControllerKind kind() const override { return future_ ? ControllerKind::f_s2c : ControllerKind::s2c; }
    bool wants_position() const override { return future_; }
    SteeringDecision decide(const ControllerFrame& f) override {
        if (!future_) return s2c(f.user, f.physical, p_);
        return f_s2c(f.user, prediction_or_current(f), FusionWeight(effective_mu(f)), f.physical, p_);
    }

 private:
    bool future_;
    ControllerParams p_;
};

class TapfController final : public Controller {
 public:
    TapfController(bool future, ControllerParams p) : future_(future), p_(p) {}
    ControllerKind kind() const override { return future_ ? ControllerKind::f_tapf : ControllerKind::tapf; }
    bool wants_position() const override { return future_; }
    SteeringDecision decide(const ControllerFrame& f) override {
        if (!future_) return tapf(f.user, f.physical, p_);
        return f_tapf(f.user, prediction_or_current(f), FusionWeight(effective_mu(f)), f.physical, p_);
    }

 private:
    bool future_;
    ControllerParams p_;
};

class ArcController final : public Controller {
 public:
    ArcController(bool future, ControllerParams p) : future_(future), p_(p) {}
    ControllerKind kind() const override { return future_ ? ControllerKind::f_arc : ControllerKind::arc; }
    bool wants_position() const override { return future_; }
    SteeringDecision decide(const ControllerFrame& f) override {
        SteeringDecision d =
            future_ ? f_arc(f.user, prediction_or_current(f), FusionWeight(effective_mu(f)), f.virtual_space,
                            f.physical, p_)
                    : arc(f.user, previous_ml_, f.virtual_space, f.physical, p_);
        previous_ml_ = d.ml_current;
        return d;
    }

 private:
    bool future_;
    ControllerParams p_;
    std::optional<double> previous_ml_;
};

class MpcController final : public Controller {
 public:
    MpcController(bool future, ControllerParams p) : future_(future), p_(p) {}
    ControllerKind kind() const override { return future_ ? ControllerKind::f_mpcred : ControllerKind::mpcred; }
    bool wants_direction() const override { return future_; }
    bool deciding(double time) const override { return time >= next_plan_; }
    SteeringDecision decide(const ControllerFrame& f) override {
        if (deciding(f.time)) {
            const DirectionProbs gamma = future_ && f.gamma ? *f.gamma : DirectionProbs::uniform();
            action_ = f_mpcred(f.user, gamma, f.physical, p_.mpc_depth, p_.mpc_alpha, p_).action;
            next_plan_ = f.time + p_.mpc_replan_interval - 1e-9;
        }
        SteeringDecision d;
        d.action = action_;
        d.gains = mpc_action_gains(action_, p_);
        return d;
    }

 private:
    bool future_;
    ControllerParams p_;
    MpcAction action_ = MpcAction::none;
    double next_plan_ = -std::numeric_limits<double>::infinity();
};

}  // namespace

std::unique_ptr<Controller> make_controller(ControllerKind kind, const ControllerParams& params) {
    const bool future = is_future_variant(kind);
    switch (vanilla_of(kind)) {
        case ControllerKind::s2c: return std::make_unique<S2CController>(future, params);
        case ControllerKind::tapf: return std::make_unique<TapfController>(future, params);
        case ControllerKind::arc: return std::make_unique<ArcController>(future, params);
        case ControllerKind::mpcred: return std::make_unique<MpcController>(future, params);
        default: break;
    }
    throw std::invalid_argument("make_controller: bad kind");
}

}  // namespace frdw
