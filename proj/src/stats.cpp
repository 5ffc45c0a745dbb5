#include "vaxnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "vaxnet/error.hpp"

namespace vaxnet::stats {

Correlation weighted_pearson(std::span<const double> x, std::span<const double> y,
                             std::span<const double> w) {
    const std::size_t n = x.size();
    if (y.size() != n || w.size() != n) throw Error("weighted_pearson: length mismatch");
    if (n < 3) throw Error("weighted_pearson: need at least 3 points");

    double sw = 0, mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(w[i] > 0) || !std::isfinite(w[i]))
            throw Error("weighted_pearson: weights must be positive and finite");
        sw += w[i];
        mx += w[i] * x[i];
        my += w[i] * y[i];
    }
    mx /= sw;
    my /= sw;

    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += w[i] * dx * dx;
        syy += w[i] * dy * dy;
        sxy += w[i] * dx * dy;
    }
    if (sxx <= 0 || syy <= 0) throw Error("weighted_pearson: zero weighted variance");

    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);

    const double dof = static_cast<double>(n) - 2.0;
    double p;
    if (std::abs(r) >= 1.0) {
        p = 0.0;
    } else {
        const double t = r * std::sqrt(dof / (1.0 - r * r));
        p = student_t_two_sided(t, dof);
    }
    return {r, p};
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
    std::vector<double> ones(x.size(), 1.0);
    return weighted_pearson(x, y, ones);
}

double student_t_two_sided(double t, double dof) {
    if (!std::isfinite(t)) return 0.0;
    boost::math::students_t dist(dof);
    return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double fisher_exact_2x2(long a, long b, long c, long d) {
    if (a < 0 || b < 0 || c < 0 || d < 0) throw Error("fisher_exact_2x2: negative cell");
    const long n = a + b + c + d;
    if (n == 0) throw Error("fisher_exact_2x2: all-zero table");

    // Tables with fixed margins are indexed by the top-left cell k.
    const long row1 = a + b, col1 = a + c, row2 = c + d;
    const long lo = std::max(0L, col1 - row2);
    const long hi = std::min(row1, col1);
    const auto size = static_cast<std::size_t>(hi - lo + 1);

    // Hypergeometric weights relative to the mode, built outward with the
    // ratio p(k+1)/p(k) = (row1-k)(col1-k) / ((k+1)(row2-col1+k+1)). All
    // weights are <= 1, so nothing overflows and small tables stay exact.
    const long mode = std::clamp((row1 + 1) * (col1 + 1) / (n + 2), lo, hi);
    std::vector<double> weight(size, 0.0);
    weight[mode - lo] = 1.0;
    for (long k = mode; k < hi; ++k) {
        const double ratio = static_cast<double>(row1 - k) * static_cast<double>(col1 - k) /
                             (static_cast<double>(k + 1) * static_cast<double>(row2 - col1 + k + 1));
        weight[k + 1 - lo] = weight[k - lo] * ratio;
    }
    for (long k = mode; k > lo; --k) {
        const double ratio = static_cast<double>(k) * static_cast<double>(row2 - col1 + k) /
                             (static_cast<double>(row1 - k + 1) * static_cast<double>(col1 - k + 1));
        weight[k - 1 - lo] = weight[k - lo] * ratio;
    }

    const double observed = weight[a - lo];
    const double cutoff = observed * (1.0 + 1e-7);
    double total = 0.0, tail = 0.0;
    for (double w : weight) {
        total += w;
        if (w <= cutoff) tail += w;
    }
    return std::min(1.0, tail / total);
}

double wilcoxon_signed_rank_paired(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error("wilcoxon_signed_rank_paired: length mismatch");
    if (x.empty()) throw Error("wilcoxon_signed_rank_paired: empty input");

    std::vector<double> diff;
    diff.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        if (d != 0.0) diff.push_back(d);
    }
    const std::size_t n = diff.size();
    if (n == 0) return 1.0;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::abs(diff[i]) < std::abs(diff[j]);
    });

    // Doubled ranks are integers even with average ranks for ties.
    std::vector<long> rank2(n);
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && std::abs(diff[order[j + 1]]) == std::abs(diff[order[i]])) ++j;
        const long twice_avg = static_cast<long>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = twice_avg;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }

    long w_plus2 = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (diff[i] > 0) w_plus2 += rank2[i];

    if (n <= static_cast<std::size_t>(kWilcoxonExactMaxN)) {
        const long max_sum = std::accumulate(rank2.begin(), rank2.end(), 0L);
        std::vector<double> count(static_cast<std::size_t>(max_sum) + 1, 0.0);
        count[0] = 1.0;
        long reach = 0;
        for (long r : rank2) {
            for (long s = reach; s >= 0; --s)
                if (count[s] != 0.0) count[s + r] += count[s];
            reach += r;
        }
        double upper = 0.0;
        for (long s = w_plus2; s <= max_sum; ++s) upper += count[s];
        return upper / std::ldexp(1.0, static_cast<int>(n));
    }

    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1.0) / 4.0;
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    if (var <= 0.0) return 1.0;
    const double w_plus = static_cast<double>(w_plus2) / 2.0;
    const double z = (w_plus - mean - 0.5) / std::sqrt(var);
    return normal_upper_tail(z);
}

Interval wilson_interval(long successes, long trials, double z) {
    if (trials <= 0) throw Error("wilson_interval: no trials");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    // The bounds are exact at the ends of the range.
    return {successes == 0 ? 0.0 : std::max(0.0, centre - half),
            successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

}  // namespace vaxnet::stats
