#pragma once

// Test-only oracles, deliberately independent of the library's numeric
// paths: long-double composite-Simpson CDFs against lgamma-based
// densities, std::mt19937_64 Monte Carlo, finite differences, and grid
// argmax. Frozen expected values in the tests were produced by these.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// composite Simpson at fixed fine resolution, long double accumulation
inline long double simpson_fixed(const std::function<long double(long double)>& f,
                                 long double a, long double b, int panels = 4000) {
    const long double h = (b - a) / panels;
    long double acc = 0.0L;
    for (int i = 0; i < panels; ++i) {
        const long double x0 = a + i * h;
        acc += (f(x0) + 4.0L * f(x0 + 0.5L * h) + f(x0 + h)) * h / 6.0L;
    }
    return acc;
}

inline long double chi2_logpdf(long double x, int df) {
    const long double k = 0.5L * df;
    return (k - 1.0L) * std::log(x) - 0.5L * x - k * 0.69314718055994530942L -
           std::lgamma(static_cast<double>(k));
}

// chi-square CDF by direct density integration
inline double chi2_cdf(double x, int df) {
    if (x <= 0.0) return 0.0;
    auto pdf = [df](long double t) -> long double {
        return t <= 0.0L ? 0.0L : std::exp(chi2_logpdf(t, df));
    };
    return static_cast<double>(simpson_fixed(pdf, 0.0L, x, 6000));
}

// standard normal CDF by density integration from 0
inline double normal_cdf(double x) {
    auto pdf = [](long double t) -> long double {
        return 0.39894228040143267794L * std::exp(-0.5L * t * t);
    };
    if (x >= 0.0) return 0.5 + static_cast<double>(simpson_fixed(pdf, 0.0L, x, 4000));
    return 0.5 - static_cast<double>(simpson_fixed(pdf, x, 0.0L, 4000));
}

// bisection on a monotone cdf
inline double invert_cdf(const std::function<double(double)>& cdf, double p, double lo,
                         double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Monte Carlo empirical CDF of chi-square draws (std gamma sampler)
inline double chi2_cdf_mc(double x, int df, int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::gamma_distribution<double> gamma(0.5 * df, 2.0);
    long long hits = 0;
    for (int i = 0; i < n; ++i)
        if (gamma(gen) <= x) ++hits;
    return static_cast<double>(hits) / n;
}

// Monte Carlo noncentral-t CDF via N(ncp,1) / sqrt(chi2_df / df)
inline double nct_cdf_mc(double x, int df, double ncp, int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z(ncp, 1.0);
    std::gamma_distribution<double> gamma(0.5 * df, 2.0);
    long long hits = 0;
    for (int i = 0; i < n; ++i) {
        const double t = z(gen) / std::sqrt(gamma(gen) / df);
        if (t <= x) ++hits;
    }
    return static_cast<double>(hits) / n;
}

// central finite differences of a 2->2 map, determinant of the Jacobian
inline double jacobian_det_fd(const std::function<std::pair<double, double>(double, double)>& f,
                              double x, double y, double h = 1e-6) {
    const auto [f1px, f2px] = f(x + h, y);
    const auto [f1mx, f2mx] = f(x - h, y);
    const auto [f1py, f2py] = f(x, y + h);
    const auto [f1my, f2my] = f(x, y - h);
    const double j11 = (f1px - f1mx) / (2 * h), j12 = (f1py - f1my) / (2 * h);
    const double j21 = (f2px - f2mx) / (2 * h), j22 = (f2py - f2my) / (2 * h);
    return j11 * j22 - j12 * j21;
}

// argmax of f on a dense grid
inline double grid_argmax(const std::function<double(double)>& f, double lo, double hi,
                          int n = 20000) {
    double best = lo, bestv = f(lo);
    for (int i = 1; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1);
        const double v = f(x);
        if (v > bestv) {
            bestv = v;
            best = x;
        }
    }
    return best;
}

// number of strict local maxima of f sampled on an n-point grid
inline int local_maxima_count(const std::function<double(double)>& f, double lo, double hi,
                              int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = f(lo + (hi - lo) * i / (n - 1));
    int count = 0;
    for (int i = 1; i + 1 < n; ++i)
        if (v[i] > v[i - 1] && v[i] > v[i + 1]) ++count;
    return count;
}

// Kolmogorov-Smirnov distance of sorted samples against a CDF
inline double ks_distance(std::vector<double> samples,
                          const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double c = cdf(samples[i]);
        d = std::max(d, std::fabs(c - (i + 1) / n));
        d = std::max(d, std::fabs(c - i / n));
    }
    return d;
}

} // namespace oracle
