#include <doctest.h>

#include <cmath>
#include <vector>

#include "vaxnet/error.hpp"
#include "vaxnet/random.hpp"
#include "vaxnet/stats.hpp"

using namespace vaxnet;
using namespace vaxnet::stats;

namespace {

// One-sided (x > y) exact p by listing every sign pattern; ranks use midranks.
double wilcoxon_enumerate(const std::vector<double>& d) {
    std::vector<double> nz;
    for (double v : d)
        if (v != 0) nz.push_back(v);
    const std::size_t n = nz.size();
    if (n == 0) return 1.0;
    std::vector<double> rank(n);
    for (std::size_t i = 0; i < n; ++i) {
        double below = 0, ties = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(nz[j]) < std::abs(nz[i])) ++below;
            if (std::abs(nz[j]) == std::abs(nz[i])) ++ties;
        }
        rank[i] = below + (ties + 1) / 2;
    }
    double observed = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (nz[i] > 0) observed += rank[i];
    long hits = 0;
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
        double w = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ul << i)) w += rank[i];
        if (w >= observed - 1e-9) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(1ul << n);
}

double hypergeom_prob(long a, long b, long c, long d) {
    // P(table) = C(a+b, a) C(c+d, c) / C(n, a+c), via lgamma
    auto lc = [](long n, long k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); };
    return std::exp(lc(a + b, a) + lc(c + d, c) - lc(a + b + c + d, a + c));
}

// Two-sided Fisher by brute force over the support, point-probability rule.
double fisher_oracle(long a, long b, long c, long d) {
    const long r1 = a + b, c1 = a + c, n = a + b + c + d;
    const double p_obs = hypergeom_prob(a, b, c, d);
    double p = 0;
    for (long x = std::max(0L, r1 + c1 - n); x <= std::min(r1, c1); ++x) {
        const double px = hypergeom_prob(x, r1 - x, c1 - x, n - r1 - c1 + x);
        if (px <= p_obs * (1 + 1e-7)) p += px;
    }
    return std::min(1.0, p);
}

}  // namespace

TEST_CASE("weighted pearson: affine and reflected data") {
    std::vector<double> x{1, 2, 3, 4, 5}, w(5, 1.0), y, yneg;
    for (double v : x) {
        y.push_back(2 * v + 1);
        yneg.push_back(-v);
    }
    CHECK(weighted_pearson(x, y, w).r == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(weighted_pearson(x, yneg, w).r == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("weighted pearson: unequal weights against a weighted-moment computation") {
    const std::vector<double> x{1, 2, 3, 4}, y{1, 3, 2, 5}, w{1, 2, 3, 4};
    double sw = 0, mx = 0, my = 0;
    for (int i = 0; i < 4; ++i) {
        sw += w[i];
        mx += w[i] * x[i];
        my += w[i] * y[i];
    }
    mx /= sw;
    my /= sw;
    double sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < 4; ++i) {
        sxy += w[i] * (x[i] - mx) * (y[i] - my);
        sxx += w[i] * (x[i] - mx) * (x[i] - mx);
        syy += w[i] * (y[i] - my) * (y[i] - my);
    }
    const auto c = weighted_pearson(x, y, w);
    CHECK(c.r == doctest::Approx(sxy / std::sqrt(sxx * syy)).epsilon(1e-14));
    // Reference values from an independent numpy/scipy evaluation.
    CHECK(c.r == doctest::Approx(0.807207352795575).epsilon(1e-12));
    CHECK(c.p == doctest::Approx(0.192792647204425).epsilon(1e-9));
}

TEST_CASE("weighted pearson: equal weights equal plain pearson") {
    RandomStream rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(20), y(20), w(20, 2.5);
        for (int i = 0; i < 20; ++i) {
            x[i] = rng.uniform();
            y[i] = x[i] + rng.uniform();
        }
        const auto a = weighted_pearson(x, y, w), b = pearson(x, y);
        REQUIRE(std::abs(a.r - b.r) < 1e-12);
        REQUIRE(std::abs(a.p - b.p) < 1e-10);
    }
}

TEST_CASE("weighted pearson: bounded and invariant under positive affine maps") {
    RandomStream rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(8), y(8), w(8), x2(8), y2(8);
        for (int i = 0; i < 8; ++i) {
            x[i] = rng.uniform();
            y[i] = rng.uniform();
            w[i] = 0.1 + rng.uniform();
            x2[i] = 3 * x[i] - 7;
            y2[i] = 0.5 * y[i] + 2;
        }
        const double r = weighted_pearson(x, y, w).r;
        REQUIRE(std::abs(r) <= 1.0);
        REQUIRE(weighted_pearson(x2, y2, w).r == doctest::Approx(r).epsilon(1e-10));
    }
}

TEST_CASE("weighted pearson: errors") {
    std::vector<double> a{1, 2, 3}, b{1, 2}, c{1, 1, 1}, w{1, 1, 1}, wbad{1, 0, 1};
    CHECK_THROWS_AS(weighted_pearson(a, b, w), Error);
    CHECK_THROWS_AS(weighted_pearson(a, c, w), Error);
    CHECK_THROWS_AS(weighted_pearson(a, a, wbad), Error);
    std::vector<double> two{1, 2};
    CHECK_THROWS_AS(weighted_pearson(two, two, std::vector<double>{1, 1}), Error);
}

TEST_CASE("fisher: hand-enumerated tables") {
    CHECK(fisher_exact_2x2(2, 0, 0, 2) == 1.0 / 3.0);
    CHECK(fisher_exact_2x2(1, 1, 1, 1) == 1.0);
    CHECK(fisher_exact_2x2(5, 0, 0, 5) == doctest::Approx(2.0 / 252.0).epsilon(1e-15));
}

TEST_CASE("fisher: brute-force support oracle and symmetries") {
    RandomStream rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const long a = static_cast<long>(rng.below(15)), b = static_cast<long>(rng.below(15)),
                   c = static_cast<long>(rng.below(15)), d = static_cast<long>(rng.below(15));
        if (a + b + c + d == 0) continue;
        const double p = fisher_exact_2x2(a, b, c, d);
        REQUIRE(p == doctest::Approx(fisher_oracle(a, b, c, d)).epsilon(1e-9));
        REQUIRE(fisher_exact_2x2(a, c, b, d) == doctest::Approx(p).epsilon(1e-12));
        REQUIRE(fisher_exact_2x2(d, c, b, a) == doctest::Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("fisher: larger tables against scipy") {
    CHECK(fisher_exact_2x2(20, 80, 80, 20) == doctest::Approx(6.753923694513967e-18).epsilon(1e-8));
    CHECK(fisher_exact_2x2(20, 0, 80, 100) == doctest::Approx(6.643374155415398e-07).epsilon(1e-8));
}

TEST_CASE("fisher: negative cell rejected") { CHECK_THROWS_AS(fisher_exact_2x2(-1, 0, 0, 1), Error); }

TEST_CASE("wilcoxon: hand cases") {
    std::vector<double> zero(3, 0.0), d{1, 2, 3}, neg{-1, -2, -3};
    CHECK(wilcoxon_signed_rank_paired(d, zero) == 0.125);
    CHECK(wilcoxon_signed_rank_paired(neg, zero) == 1.0);
    CHECK(wilcoxon_signed_rank_paired(d, d) == 1.0);
}

TEST_CASE("wilcoxon: exact path matches full sign enumeration") {
    RandomStream rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(10);
        std::vector<double> x(n), y(n), diff(n);
        for (std::size_t i = 0; i < n; ++i) {
            // Small integer values produce ties and zeros.
            x[i] = static_cast<double>(rng.below(6));
            y[i] = static_cast<double>(rng.below(6));
            diff[i] = x[i] - y[i];
        }
        REQUIRE(wilcoxon_signed_rank_paired(x, y) == doctest::Approx(wilcoxon_enumerate(diff)).epsilon(1e-12));
    }
}

TEST_CASE("wilcoxon: normal approximation beyond the exact limit") {
    std::vector<double> d, zero(25, 0.0);
    for (int i = 1; i <= 25; ++i) d.push_back((i == 4 || i == 8) ? -i : i);
    // scipy.stats.wilcoxon(..., alternative="greater", method="approx", correction=True)
    CHECK(wilcoxon_signed_rank_paired(d, zero) == doctest::Approx(2.7180850703727664e-05).epsilon(1e-6));
}

TEST_CASE("wilson interval contains the estimate") {
    const auto ci = wilson_interval(30, 1000);
    CHECK(ci.low < 0.03);
    CHECK(ci.high > 0.03);
    const auto zero = wilson_interval(0, 100);
    CHECK(zero.low == 0.0);
    CHECK(zero.high > 0.0);
}
