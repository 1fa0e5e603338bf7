#include "frdw/agent.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <tuple>

namespace frdw {

double PlannedPath::length() const {
    double len = 0.0;
    for (std::size_t i = 1; i < waypoints.size(); ++i) len += distance(waypoints[i - 1], waypoints[i]);
    return len;
}

PathPlanner::PathPlanner(SpaceMap space, double body_radius, PlannerParams params)
    : space_(std::move(space)), radius_(body_radius), params_(params) {
    const double res = params_.resolution;
    const Vec2 lo = space_.bbox_min(), hi = space_.bbox_max();
    nx_ = static_cast<int>(std::ceil((hi.x - lo.x) / res));
    ny_ = static_cast<int>(std::ceil((hi.y - lo.y) / res));
    free_.assign(static_cast<std::size_t>(nx_) * ny_, 0);
    const double need = radius_ + params_.margin + res * std::sqrt(0.5);
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) free_[index(i, j)] = space_.min_clearance(cell_center(i, j)) >= need;

    component_.assign(free_.size(), -1);
    int label = 0;
    for (std::size_t start = 0; start < free_.size(); ++start) {
        if (!free_[start] || component_[start] >= 0) continue;
        std::deque<std::size_t> q{start};
        component_[start] = label;
        while (!q.empty()) {
            const std::size_t c = q.front();
            q.pop_front();
            const int ci = static_cast<int>(c % nx_), cj = static_cast<int>(c / nx_);
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    const int i = ci + di, j = cj + dj;
                    if ((di == 0 && dj == 0) || i < 0 || j < 0 || i >= nx_ || j >= ny_) continue;
                    const std::size_t k = index(i, j);
                    if (free_[k] && component_[k] < 0) {
                        component_[k] = label;
                        q.push_back(k);
                    }
                }
        }
        ++label;
    }
}

Vec2 PathPlanner::cell_center(int i, int j) const {
    const Vec2 lo = space_.bbox_min();
    return {lo.x + (i + 0.5) * params_.resolution, lo.y + (j + 0.5) * params_.resolution};
}

bool PathPlanner::visible(const Vec2& a, const Vec2& b, double min_clearance) const {
    if (!space_.in_free_space(a)) return false;
    if (a == b) return space_.min_clearance(a) >= min_clearance;
    const Segment s(a, b);
    for (const Segment& e : space_.edges())
        if (distance_segment_segment(s, e) < min_clearance) return false;
    return true;
}

double PathPlanner::leg_clearance(const Vec2& from) const {
    // A leg may start where the agent already is, even if that is slightly
    // closer than the usual demand, but never closer than that.
    return std::min(radius_ + params_.margin, space_.min_clearance(from)) - 1e-9;
}

std::vector<std::size_t> PathPlanner::connect(const Vec2& p, double min_clearance) const {
    std::vector<std::size_t> out;
    const Vec2 lo = space_.bbox_min();
    const int ci = static_cast<int>(std::floor((p.x - lo.x) / params_.resolution));
    const int cj = static_cast<int>(std::floor((p.y - lo.y) / params_.resolution));
    const int reach = static_cast<int>(std::ceil(params_.connect_radius / params_.resolution));
    for (int j = cj - reach; j <= cj + reach; ++j)
        for (int i = ci - reach; i <= ci + reach; ++i) {
            if (i < 0 || j < 0 || i >= nx_ || j >= ny_ || !free_[index(i, j)]) continue;
            const Vec2 c = cell_center(i, j);
            if (distance(c, p) <= params_.connect_radius && visible(p, c, min_clearance)) out.push_back(index(i, j));
        }
    return out;
}

bool PathPlanner::reachable(const Vec2& from, const Vec2& to) const {
    const double demand = radius_ + params_.margin;
    if (visible(from, to, leg_clearance(from)) && space_.min_clearance(to) >= demand - 1e-9) return true;
    const auto a = connect(from, leg_clearance(from));
    const auto b = connect(to, demand - 1e-9);
    for (std::size_t x : a)
        for (std::size_t y : b)
            if (component_[x] == component_[y]) return true;
    return false;
}

PlannedPath PathPlanner::plan(const Vec2& from, const Vec2& to) const {
    if (auto p = try_plan(from, to)) return *p;
    throw PlanningError("plan_virtual_path: target unreachable");
}

std::optional<PlannedPath> PathPlanner::try_plan(const Vec2& from, const Vec2& to) const {
    const double demand = radius_ + params_.margin - 1e-9;
    if (from == to) return PlannedPath{{from}, 0};
    if (space_.min_clearance(to) < demand) return std::nullopt;
    if (visible(from, to, leg_clearance(from))) return PlannedPath{{from, to}, 1};

    const auto starts = connect(from, leg_clearance(from));
    const auto goals = connect(to, demand);
    if (starts.empty() || goals.empty()) return std::nullopt;

    // A* over cells; node N is the goal point itself.
    const std::size_t n = free_.size(), goal = n;
    std::vector<double> g(n + 1, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> parent(n + 1, std::numeric_limits<std::size_t>::max());
    std::vector<char> closed(n + 1, 0);
    std::vector<char> is_goal(n, 0);
    for (std::size_t k : goals) is_goal[k] = 1;
    auto center = [&](std::size_t k) { return cell_center(static_cast<int>(k % nx_), static_cast<int>(k / nx_)); };
    using Item = std::tuple<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    for (std::size_t k : starts) {
        g[k] = distance(from, center(k));
        open.emplace(g[k] + distance(center(k), to), k);
    }
    const double res = params_.resolution;
    while (!open.empty()) {
        const auto [f, k] = open.top();
        open.pop();
        if (closed[k]) continue;
        closed[k] = 1;
        if (k == goal) break;
        const Vec2 ck = center(k);
        if (is_goal[k]) {
            const double cand = g[k] + distance(ck, to);
            if (cand < g[goal]) {
                g[goal] = cand;
                parent[goal] = k;
                open.emplace(cand, goal);
            }
        }
        const int ci = static_cast<int>(k % nx_), cj = static_cast<int>(k / nx_);
        for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) {
                const int i = ci + di, j = cj + dj;
                if ((di == 0 && dj == 0) || i < 0 || j < 0 || i >= nx_ || j >= ny_) continue;
                const std::size_t m = index(i, j);
                if (!free_[m] || closed[m]) continue;
                const double step = (di != 0 && dj != 0) ? res * std::sqrt(2.0) : res;
                if (g[k] + step < g[m]) {
                    g[m] = g[k] + step;
                    parent[m] = k;
                    open.emplace(g[m] + distance(center(m), to), m);
                }
            }
    }
    if (!closed[goal]) return std::nullopt;

    std::vector<Vec2> raw{to};
    for (std::size_t k = parent[goal]; k != std::numeric_limits<std::size_t>::max(); k = parent[k])
        raw.push_back(center(k));
    raw.push_back(from);
    std::reverse(raw.begin(), raw.end());

    // String pulling: from each anchor jump to the farthest visible raw point.
    PlannedPath path{{from}, 1};
    std::size_t i = 0;
    while (i + 1 < raw.size()) {
        const double need = i == 0 ? leg_clearance(from) : demand;
        std::size_t next = i + 1;
        for (std::size_t j = raw.size() - 1; j > i + 1; --j) {
            if (visible(raw[i], raw[j], need)) {
                next = j;
                break;
            }
        }
        path.waypoints.push_back(raw[next]);
        i = next;
    }
    return path;
}

PlannedPath plan_virtual_path(const Vec2& from, const Target& to, const SpaceMap& vspace, double body_radius) {
    return PathPlanner(vspace, body_radius).plan(from, to.position);
}

MotionCommand step_agent(PlannedPath& path, const UserState& u, const UserParams& params, double dt,
                         double collect_radius) {
    const Vec2 pos = u.virtual_pose.position;
    const std::size_t last = path.waypoints.size() - 1;
    while (path.cursor < last && distance(pos, path.waypoints[path.cursor]) < 1e-9) ++path.cursor;
    if (path.cursor >= last && distance(pos, path.goal()) <= collect_radius) return {0.0, 0.0, true};

    const Vec2 wp = path.waypoints[path.cursor];
    const Vec2 d = wp - pos;
    const double dist = d.norm();
    const double bearing = wrap_angle(d.angle() - u.virtual_pose.heading);
    const double max_turn = params.angular_speed * dt;
    MotionCommand cmd;
    cmd.dtheta = std::clamp(bearing, -max_turn, max_turn);
    if (std::abs(bearing) > kAlignTolerance) return cmd;
    cmd.dv = std::min(params.linear_speed * dt, dist);
    if (cmd.dv >= dist && path.cursor < last) ++path.cursor;
    return cmd;
}

PlanRollout rollout_plan(const PlannedPath& path, const Pose& virtual_pose, const UserParams& params,
                         double horizon) {
    PlanRollout r{virtual_pose, path.cursor};
    double t = horizon;
    while (t > 0.0 && r.cursor < path.waypoints.size()) {
        const Vec2 d = path.waypoints[r.cursor] - r.pose.position;
        const double dist = d.norm();
        if (dist < 1e-12) {
            ++r.cursor;
            continue;
        }
        const double bearing = wrap_angle(d.angle() - r.pose.heading);
        const double turn_time = std::abs(bearing) / params.angular_speed;
        if (turn_time >= t) {
            r.pose.heading = wrap_angle(r.pose.heading + std::copysign(params.angular_speed * t, bearing));
            return r;
        }
        t -= turn_time;
        r.pose.heading = d.angle();
        const double walk_time = dist / params.linear_speed;
        if (walk_time >= t) {
            r.pose.position += d * (params.linear_speed * t / dist);
            return r;
        }
        t -= walk_time;
        r.pose.position = path.waypoints[r.cursor];
        ++r.cursor;
    }
    if (r.cursor >= path.waypoints.size()) r.cursor = path.waypoints.size() - 1;
    return r;
}

Vec2 future_point_on_plan(const PlannedPath& path, const UserState& u, const UserParams& params, double horizon) {
    return rollout_plan(path, u.virtual_pose, params, horizon).pose.position;
}

}  // namespace frdw
