#pragma once
// Brute-force references shared by the unit tests and the acceptance binary.
// Each suite returns the number of disagreements over its random cases.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "frdw/controllers.hpp"
#include "frdw/environment.hpp"
#include "frdw/rng.hpp"
#include "frdw/space_map.hpp"
#include "frdw/stats.hpp"

namespace frdw::oracle {

// Dense parametric sampling of the segment.
inline double sampled_point_segment(const Vec2& p, const Segment& s, int n = 20000) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) best = std::min(best, distance(p, s.a + s.direction() * (double(i) / n)));
    return best;
}

// Marches the ray in small steps until it leaves free space.
inline double marched_raycast(const SpaceMap& m, const Vec2& o, const Vec2& d, double max_range, double step) {
    double t = 0.0;
    while (t < max_range) {
        const double next = std::min(t + step, max_range);
        if (!m.in_free_space(o + d * next)) return next;
        t = next;
    }
    return max_range;
}

// Steps the disc forward until its clearance drops to the radius.
inline double marched_sweep(const SpaceMap& m, const Vec2& o, const Vec2& d, double r, double max_range,
                            double step) {
    for (double t = 0.0; t < max_range; t += step) {
        const Vec2 p = o + d * t;
        if (!m.in_free_space(p) || m.min_clearance(p) < r) return t;
    }
    return max_range;
}

inline Vec2 random_free_point(Rng& rng, const SpaceMap& m) {
    for (;;) {
        const Vec2 lo = m.bbox_min(), hi = m.bbox_max();
        const Vec2 p{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        if (m.in_free_space(p)) return p;
    }
}

struct SuiteResult {
    int cases = 0;
    int failures = 0;
};

inline SuiteResult point_segment_suite(std::uint64_t seed, int cases) {
    Rng rng(seed, RngStream::test);
    SuiteResult r;
    for (int i = 0; i < cases; ++i) {
        const Segment s({rng.uniform(-3, 3), rng.uniform(-3, 3)}, {rng.uniform(-3, 3), rng.uniform(-3, 3)});
        const Vec2 p{rng.uniform(-5, 5), rng.uniform(-5, 5)};
        ++r.cases;
        // The sampling step bounds the reference error.
        const double tol = s.length() / 20000.0 + 1e-9;
        const double got = distance_point_segment(p, s);
        const double ref = sampled_point_segment(p, s);
        if (got > ref + 1e-12 || ref - got > tol) ++r.failures;
    }
    return r;
}

inline SuiteResult clearance_suite(std::uint64_t seed, int cases) {
    Rng rng(seed, RngStream::test);
    SuiteResult r;
    for (Experiment e : {Experiment::e1, Experiment::e2, Experiment::e3, Experiment::e4}) {
        const SpaceMap m = build_physical_space(e);
        for (int i = 0; i < cases; ++i) {
            const Vec2 p = random_free_point(rng, m);
            double ref = std::numeric_limits<double>::infinity();
            for (const Segment& s : m.edges()) ref = std::min(ref, distance_point_segment(p, s));
            ++r.cases;
            if (std::abs(m.min_clearance(p) - ref) > 1e-12) ++r.failures;
        }
    }
    return r;
}

inline SuiteResult raycast_suite(std::uint64_t seed, int cases) {
    Rng rng(seed, RngStream::test);
    SuiteResult r;
    constexpr double step = 1e-3;
    for (Experiment e : {Experiment::e1, Experiment::e2, Experiment::e3, Experiment::e4}) {
        const SpaceMap m = build_physical_space(e);
        for (int i = 0; i < cases; ++i) {
            const Vec2 o = random_free_point(rng, m);
            const Vec2 d = Vec2::from_angle(rng.uniform(-kPi, kPi));
            const auto got = m.raycast(o, d, 20.0);
            const double ref = marched_raycast(m, o, d, 20.0, step);
            ++r.cases;
            if (!got || *got > ref + 1e-9 || ref - *got > step + 1e-9) ++r.failures;
        }
    }
    return r;
}

inline SuiteResult sweep_suite(std::uint64_t seed, int cases) {
    Rng rng(seed, RngStream::test);
    SuiteResult r;
    constexpr double step = 1e-3;
    constexpr double radius = 0.5;
    for (Experiment e : {Experiment::e1, Experiment::e2, Experiment::e3, Experiment::e4}) {
        const SpaceMap m = build_physical_space(e);
        for (int i = 0; i < cases; ++i) {
            Vec2 o = random_free_point(rng, m);
            if (m.min_clearance(o) <= radius) {
                --i;
                continue;
            }
            const Vec2 d = Vec2::from_angle(rng.uniform(-kPi, kPi));
            const double got = m.sweep(o, d, radius, 20.0);
            const double ref = marched_sweep(m, o, d, radius, 20.0, step);
            ++r.cases;
            if (std::abs(got - ref) > step + 1e-6) ++r.failures;
        }
    }
    return r;
}

/// Pruned search must choose an action whose full expected cost is minimal.
inline SuiteResult mpc_pruning_suite(std::uint64_t seed, int cases, int depth = 4) {
    Rng rng(seed, RngStream::test);
    SuiteResult r;
    const Experiment envs[] = {Experiment::e1, Experiment::e2, Experiment::e3, Experiment::e4};
    for (int i = 0; i < cases; ++i) {
        const SpaceMap m = build_physical_space(envs[i % 4]);
        UserState u;
        u.physical_pose = {random_free_point(rng, m), rng.uniform(-kPi, kPi)};
        u.virtual_pose = {{0, 0}, rng.uniform(-kPi, kPi)};
        u.linear_speed = 1.0;
        DirectionProbs g;
        g.forward = rng.uniform(0.05, 1.0);
        g.left = rng.uniform(0.05, 1.0);
        g.right = rng.uniform(0.05, 1.0);
        const double sum = g.forward + g.left + g.right;
        g.forward /= sum;
        g.left /= sum;
        g.right /= sum;
        const MpcResult pruned = f_mpcred(u, g, m, depth, 0.8, {}, true);
        const MpcResult full = f_mpcred(u, g, m, depth, 0.8, {}, false);
        const auto costs = mpc_root_costs(u, g, m, depth, 0.8);
        const double best = *std::min_element(costs.begin(), costs.end());
        const double chosen = costs[static_cast<int>(pruned.action)];
        ++r.cases;
        const double tol = 1e-9 * std::max(1.0, std::abs(best));
        if (chosen > best + tol || std::abs(pruned.cost - full.cost) > tol || pruned.nodes > full.nodes) ++r.failures;
    }
    return r;
}

/// Exact two-sided signed-rank p by enumerating all 2^n sign patterns of the
/// observed (mid)ranks: P(|W+ - mean| >= |w - mean|).
inline double enumerated_signed_rank_p(const std::vector<double>& diffs) {
    std::vector<double> d;
    for (double x : diffs)
        if (x != 0.0) d.push_back(x);
    std::sort(d.begin(), d.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    std::vector<double> rank(d.size());
    for (std::size_t i = 0; i < d.size();) {
        std::size_t j = i;
        while (j < d.size() && std::abs(d[j]) == std::abs(d[i])) ++j;
        for (std::size_t k = i; k < j; ++k) rank[k] = 0.5 * double(i + 1 + j);
        i = j;
    }
    double w = 0.0, total = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        total += rank[i];
        if (d[i] > 0.0) w += rank[i];
    }
    const double mean = total / 2.0;
    const double obs = std::abs(w - mean) - 1e-9;
    const std::size_t patterns = std::size_t{1} << d.size();
    std::size_t extreme = 0;
    for (std::size_t mask = 0; mask < patterns; ++mask) {
        double s = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (mask >> i & 1u) s += rank[i];
        if (std::abs(s - mean) >= obs) ++extreme;
    }
    return double(extreme) / double(patterns);
}

struct WilcoxonAgreement {
    int cases = 0;
    int failures = 0;
    double worst = 0.0;
};

/// Random paired samples of size lo..hi (shifted so every p range is covered).
inline WilcoxonAgreement wilcoxon_enumeration_suite(std::uint64_t seed, std::size_t lo, std::size_t hi, int per_n,
                                                    double tol, bool ties) {
    Rng rng(seed, RngStream::test);
    WilcoxonAgreement r;
    for (std::size_t n = lo; n <= hi; ++n) {
        for (int c = 0; c < per_n; ++c) {
            const double shift = rng.uniform(-1.5, 1.5);
            std::vector<double> a(n), b(n, 0.0), d(n);
            for (std::size_t i = 0; i < n; ++i) {
                double x = rng.normal(shift, 1.0);
                if (ties) x = std::round(x * 2.0) / 2.0;
                a[i] = x;
                d[i] = x;
            }
            const TestResult got = wilcoxon_signed_rank(a, b);
            if (got.degenerate) continue;
            const double ref = enumerated_signed_rank_p(d);
            const double err = std::abs(got.p - ref);
            ++r.cases;
            r.worst = std::max(r.worst, err);
            if (err > tol) ++r.failures;
        }
    }
    return r;
}

}  // namespace frdw::oracle
