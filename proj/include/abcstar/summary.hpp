#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace abcstar {

/// An ordered collection of scalar summary values (the per-test data the
/// equivalence statistics consume).
struct SummarySet {
    std::vector<double> values;

    SummarySet() = default;
    explicit SummarySet(std::vector<double> v) : values(std::move(v)) {}

    int count() const { return static_cast<int>(values.size()); }
};

/// Paired values for correlation tests.
struct PairSet {
    std::vector<double> first;
    std::vector<double> second;

    int count() const { return static_cast<int>(first.size()); }
};

double mean(const std::vector<double>& v);

/// Centered sum of squares, sum (v_i - vbar)^2.
double centered_ss(const std::vector<double>& v);

/// Unbiased sample variance (divisor count-1).
double sample_variance(const std::vector<double>& v);

/// Sample standard deviation (divisor count-1).
double sample_sd(const std::vector<double>& v);

/// Maximum-likelihood variance (divisor count).
double mle_variance(const std::vector<double>& v);

/// Sample Pearson correlation of the pairs. Requires count >= 2.
double pearson_r(const PairSet& p);

/// Fisher z-transform atanh(r), input clamped to +-(1 - 1e-12) so
/// finite-sample correlations at +-1 stay finite.
double fisher_z(double r);

/// Lag-k sample autocorrelation of a series (pairs (x_t, x_{t+k})).
double lag_autocorrelation(const std::vector<double>& x, int lag);

} // namespace abcstar
