#pragma once
/**
 * @file stats.hpp
 * @brief Descriptive statistics and paired significance tests.
 */

#include <span>
#include <stdexcept>
#include <utility>

namespace frdw {

class StatsError : public std::invalid_argument {
 public:
    using std::invalid_argument::invalid_argument;
};

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;  ///< Bessel-corrected
};

/// Throws StatsError for fewer than two values.
MeanSd mean_sd(std::span<const double> xs);

struct TestResult {
    double statistic = 0.0;  ///< t or z; sign follows mean(a - b)
    double p = 1.0;          ///< two-sided
    bool degenerate = false; ///< no usable variation in the differences
    std::size_t n = 0;       ///< pairs used (Wilcoxon drops zero differences)
    bool exact = false;      ///< p from the exact null distribution rather than the normal approximation
};

/// Paired Student t-test on d = a - b with n - 1 degrees of freedom.
TestResult paired_t_test(std::span<const double> a, std::span<const double> b);

inline constexpr std::size_t kWilcoxonExactMax = 25;

/// Wilcoxon signed-rank test on d = a - b. Zero differences are dropped, tied
/// |d| get midranks, and z uses the tie-corrected variance plus a continuity
/// correction. For n <= kWilcoxonExactMax the p value comes from the exact
/// (conditional on ties) null distribution of W+; above it from the normal
/// approximation.
TestResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

}  // namespace frdw
