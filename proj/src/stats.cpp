#include "frdw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace frdw {

namespace {

void check_pairs(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw StatsError("paired sample: arms differ in length");
    if (a.size() < 2) throw StatsError("paired sample: need at least two pairs");
}

// Two-sided exact p under the null that each |d| is positive with probability
// 1/2. Midranks are multiples of 1/2, so the subset-sum recurrence runs over
// doubled ranks; the distribution is symmetric about half the rank total.
double exact_signed_rank_p(const std::vector<std::size_t>& doubled_ranks, std::size_t doubled_w) {
    std::size_t total = 0;
    for (std::size_t r : doubled_ranks) total += r;
    std::vector<double> count(total + 1, 0.0);
    count[0] = 1.0;
    for (std::size_t r : doubled_ranks)
        for (std::size_t w = total; w >= r; --w) count[w] += count[w - r];
    const std::size_t tail_w = std::min(doubled_w, total - doubled_w);
    double tail = 0.0;
    for (std::size_t k = 0; k <= tail_w; ++k) tail += count[k];
    return std::min(1.0, 2.0 * tail / std::ldexp(1.0, static_cast<int>(doubled_ranks.size())));
}

}  // namespace

MeanSd mean_sd(std::span<const double> xs) {
    if (xs.size() < 2) throw StatsError("mean_sd: need at least two values");
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

TestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
    check_pairs(a, b);
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    const MeanSd m = mean_sd(d);
    TestResult r;
    r.n = d.size();
    if (!(m.sd > 0.0)) {
        r.degenerate = true;
        return r;
    }
    const double n = static_cast<double>(d.size());
    r.statistic = m.mean / (m.sd / std::sqrt(n));
    const boost::math::students_t dist(n - 1.0);
    r.p = std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.statistic))), 0.0, 1.0);
    return r;
}

TestResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    check_pairs(a, b);
    std::vector<double> d;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (const double x = a[i] - b[i]; x != 0.0) d.push_back(x);
    TestResult r;
    r.n = d.size();
    if (d.empty()) {
        r.degenerate = true;
        return r;
    }
    std::sort(d.begin(), d.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });

    double w_plus = 0.0;
    double tie_term = 0.0;
    std::vector<std::size_t> doubled_ranks(d.size());
    std::size_t doubled_w = 0;
    for (std::size_t i = 0; i < d.size();) {
        std::size_t j = i;
        while (j < d.size() && std::abs(d[j]) == std::abs(d[i])) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            doubled_ranks[k] = i + 1 + j;
            if (d[k] > 0.0) {
                w_plus += midrank;
                doubled_w += i + 1 + j;
            }
        }
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double n = static_cast<double>(d.size());
    const double mu = n * (n + 1.0) / 4.0;
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if (!(var > 0.0)) {
        r.degenerate = true;
        return r;
    }
    const double dev = w_plus - mu;
    const double corrected = std::abs(dev) <= 0.5 ? 0.0 : dev - std::copysign(0.5, dev);
    r.statistic = corrected / std::sqrt(var);
    if (d.size() <= kWilcoxonExactMax) {
        r.exact = true;
        r.p = exact_signed_rank_p(doubled_ranks, doubled_w);
    } else {
        r.p = std::clamp(std::erfc(std::abs(r.statistic) / std::sqrt(2.0)), 0.0, 1.0);
    }
    return r;
}

}  // namespace frdw
