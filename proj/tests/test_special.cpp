#include <doctest.h>

#include "abcstar/special.hpp"
#include "oracles.hpp"

#include <stdexcept>

#include <cmath>

using namespace abcstar;

TEST_SUITE_BEGIN("special");

TEST_CASE("chi2_cdf anchors") {
    CHECK(chi2_cdf(0.0, 5) == 0.0);
    // df = 2 is exponential with mean 2
    CHECK(chi2_cdf(2.0, 2) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    // independent density-integration oracle
    CHECK(chi2_cdf(59.0, 59) == doctest::Approx(oracle::chi2_cdf(59.0, 59)).epsilon(1e-9));
    CHECK_THROWS_AS(chi2_cdf(-1.0, 5), std::domain_error);
    CHECK_THROWS_AS(chi2_cdf(1.0, 0), std::domain_error);
}

TEST_CASE("chi2_cdf against 1e7-draw Monte Carlo") {
    const double mc = oracle::chi2_cdf_mc(59.0, 59, 10000000, 20260801ULL);
    const double p = chi2_cdf(59.0, 59);
    const double se = std::sqrt(p * (1 - p) / 1e7);
    CHECK(std::fabs(p - mc) < 4.0 * se);
}

TEST_CASE("chi2_cdf monotone and agrees with MC empirical CDF on a grid") {
    const int df = 17;
    double prev = 0.0;
    for (int i = 1; i <= 20; ++i) {
        const double x = i * 2.5;
        const double p = chi2_cdf(x, df);
        CHECK(p >= prev);
        CHECK(p <= 1.0);
        prev = p;
        const double mc = oracle::chi2_cdf_mc(x, df, 200000, 7000 + i);
        const double se = std::sqrt(std::max(p * (1 - p), 1e-9) / 200000);
        CHECK(std::fabs(p - mc) < 4.0 * se);
    }
}

TEST_CASE("chi2_quantile round trips") {
    for (double x : {1.0, 5.0, 20.0})
        CHECK(chi2_quantile(chi2_cdf(x, 7), 7) == doctest::Approx(x).epsilon(1e-10));
    // df = 2: exponential median
    CHECK(chi2_quantile(0.5, 2) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    // bisection on the oracle CDF
    const double q99 = oracle::invert_cdf([](double v) { return oracle::chi2_cdf(v, 59); },
                                          0.99, 1e-9, 300.0);
    CHECK(chi2_quantile(0.99, 59) == doctest::Approx(q99).epsilon(1e-7));
    CHECK_THROWS_AS(chi2_quantile(0.0, 5), std::domain_error);
    CHECK_THROWS_AS(chi2_quantile(1.0, 5), std::domain_error);

    for (int df : {1, 3, 10, 59, 107, 296}) {
        for (double p : {1e-6, 0.01, 0.3, 0.5, 0.9, 0.99, 1.0 - 1e-9}) {
            const double x = chi2_quantile(p, df);
            CHECK(chi2_cdf(x, df) == doctest::Approx(p).epsilon(1e-10));
        }
    }
}

TEST_CASE("normal cdf/quantile") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal_cdf(1.96) == doctest::Approx(oracle::normal_cdf(1.96)).epsilon(1e-10));
    CHECK(normal_quantile(0.01) ==
          doctest::Approx(oracle::invert_cdf(oracle::normal_cdf, 0.01, -10, 10)).epsilon(1e-8));
    for (double p : {1e-10, 1e-4, 0.025, 0.5, 0.8, 0.999, 1 - 1e-8})
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
    CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
}

TEST_CASE("student t cdf central properties") {
    for (int df : {1, 2, 5, 30, 199}) {
        CHECK(student_t_cdf(0.0, df, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
        for (double x : {0.3, 1.1, 2.7})
            CHECK(student_t_cdf(x, df, 0.0) + student_t_cdf(-x, df, 0.0) ==
                  doctest::Approx(1.0).epsilon(1e-11));
    }
    // large df approaches the normal
    CHECK(student_t_cdf(1.0, 100000) == doctest::Approx(normal_cdf(1.0)).epsilon(1e-4));
}

TEST_CASE("noncentral t cdf against 1e7-draw Monte Carlo") {
    const double p = student_t_cdf(1.5, 10, 2.0);
    const double mc = oracle::nct_cdf_mc(1.5, 10, 2.0, 10000000, 99121ULL);
    const double se = std::sqrt(p * (1 - p) / 1e7);
    CHECK(std::fabs(p - mc) < 4.0 * se);
}

TEST_CASE("noncentral t cdf monotone grid vs MC") {
    double prev = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double x = -2.0 + 0.5 * i;
        const double p = student_t_cdf(x, 13, 1.2);
        CHECK(p >= prev);
        prev = p;
        const double mc = oracle::nct_cdf_mc(x, 13, 1.2, 200000, 31000 + i);
        const double se = std::sqrt(std::max(p * (1 - p), 1e-9) / 200000);
        CHECK(std::fabs(p - mc) < 4.0 * se);
    }
}

TEST_CASE("student t quantile round trips") {
    for (int df : {2, 13, 107, 199})
        for (double p : {0.01, 0.2, 0.5, 0.9, 0.99})
            CHECK(student_t_cdf(student_t_quantile(p, df), df) ==
                  doctest::Approx(p).epsilon(1e-10));
}

TEST_CASE("bivariate normal rectangle probabilities") {
    // r = 0 factorizes
    CHECK(bvn_rect_prob(-1, 1, -1, 1, 0.0) ==
          doctest::Approx(std::pow(normal_cdf(1.0) - normal_cdf(-1.0), 2)).epsilon(1e-12));
    // Monte Carlo check at r = 0.3
    std::mt19937_64 gen(5150);
    std::normal_distribution<double> nd;
    const double r = 0.3, c = std::sqrt(1 - r * r);
    int hits = 0;
    const int n = 4000000;
    for (int i = 0; i < n; ++i) {
        const double a = nd(gen);
        const double b = r * a + c * nd(gen);
        if (a > -0.5 && a < 1.2 && b > -0.3 && b < 2.0) ++hits;
    }
    const double mc = static_cast<double>(hits) / n;
    const double p = bvn_rect_prob(-0.5, 1.2, -0.3, 2.0, r);
    CHECK(std::fabs(p - mc) < 4.0 * std::sqrt(p * (1 - p) / n));
    // semi-infinite bounds collapse to the univariate CDF
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(bvn_rect_prob(-inf, 0.7, -inf, inf, 0.01) ==
          doctest::Approx(normal_cdf(0.7)).epsilon(1e-9));
}

TEST_SUITE_END();
