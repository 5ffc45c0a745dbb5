#pragma once

#include <span>

namespace vaxnet::stats {

struct Correlation {
    double r;
    double p;  ///< two-sided
};

/// Weighted Pearson correlation. The p-value comes from
/// t = r * sqrt((n - 2) / (1 - r^2)) with n - 2 degrees of freedom, n being the
/// number of points (not an effective sample size).
///
/// Throws Error when lengths differ, n < 3, any weight is not positive, or
/// either weighted variance is zero.
Correlation weighted_pearson(std::span<const double> x, std::span<const double> y,
                             std::span<const double> w);

/// Ordinary Pearson correlation (all weights one).
Correlation pearson(std::span<const double> x, std::span<const double> y);

/// Two-sided Fisher exact test for the 2x2 table [[a, b], [c, d]].
///
/// Sums the hypergeometric probabilities of every table with the same margins
/// whose probability does not exceed the observed one (relative slack 1e-7).
/// Throws Error on an all-zero table.
double fisher_exact_2x2(long a, long b, long c, long d);

/// One-sided paired Wilcoxon signed-rank test, alternative x > y.
///
/// Zero differences are dropped and tied |d| get average ranks. With at most
/// 20 non-zero differences the null distribution of W+ is enumerated exactly;
/// beyond that a normal approximation with tie and continuity corrections is
/// used. Returns 1 when every difference is zero. Throws Error on a length
/// mismatch or empty input.
double wilcoxon_signed_rank_paired(std::span<const double> x, std::span<const double> y);

inline constexpr int kWilcoxonExactMaxN = 20;

/// Upper tail of the standard normal.
double normal_upper_tail(double z);

/// Two-sided Student-t tail probability P(|T| >= |t|).
double student_t_two_sided(double t, double dof);

struct Interval {
    double low;
    double high;
};

/// Wilson score interval for a binomial proportion (z = 1.959964 for 95%).
Interval wilson_interval(long successes, long trials, double z = 1.959963984540054);

}  // namespace vaxnet::stats
