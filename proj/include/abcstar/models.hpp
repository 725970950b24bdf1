#pragma once

#include "abcstar/equivalence.hpp"
#include "abcstar/interval.hpp"
#include "abcstar/rng.hpp"
#include "abcstar/summary.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace abcstar {

/// Generative-model surface the samplers consume: prior sampling/density
/// on theta, and simulation straight to per-test summary data.
struct ModelHooks {
    int dim = 1;
    std::function<std::vector<double>(RngStream&)> prior_sample;
    std::function<double(const std::vector<double>&)> prior_density;
    std::function<std::vector<SummaryData>(const std::vector<double>&, RngStream&)>
        simulate_summaries;
    std::function<std::vector<double>(const std::vector<double>&)> link; // optional
};

// ---- normal variance model (scalar theta = sigma^2) --------------------

struct NormalVarianceModel {
    int n = 0;
    Interval prior_support{0.2, 4.0};
    double s2x = 0.0; // centered sum of squares of the observed data

    double sigma2_hat() const { return s2x / n; }

    /// Model built from observed data.
    static NormalVarianceModel from_data(const std::vector<double>& x, Interval prior);

    /// Pseudo data x ~ N(0, sigma2) of length n; when normalize is set the
    /// sample is rescaled so the variance MLE is exactly sigma2.
    static NormalVarianceModel synthetic(int n, double sigma2, Interval prior,
                                         RngStream& rng, bool normalize);

    SummarySet simulate(double sigma2, int m, RngStream& rng) const;

    /// Unnormalized log posterior density on the prior support.
    double log_posterior_unnorm(double sigma2) const;

    /// Normalized posterior density and the MAP (S^2(x)/n clamped to the
    /// support).
    std::function<double(double)> exact_posterior() const;
    double exact_map() const;

    /// chi2 dispersion test seed anchored to this data set (m = n until
    /// calibrated).
    TestConfig make_test_config(double alpha) const;

    ModelHooks hooks(int m, std::uint64_t dummy = 0) const;
};

double normal_exact_posterior_normalizer(const NormalVarianceModel& model);

// ---- MA(1) model (theta = (a, sigma^2)) ---------------------------------

enum class SubsetScheme { IgnoreAutocorr, ThinTwoFive };

struct Ma1RhoBounds {
    Interval rho1; // variance-ratio coordinate
    Interval rho2; // Fisher-z difference coordinate
};

struct MA1Model {
    int n = 0;
    std::vector<double> x;
    double nu1 = 0.0; // observed variance MLE
    double nu2 = 0.0; // observed lag-1 sample autocorrelation
    SubsetScheme scheme = SubsetScheme::IgnoreAutocorr;
    Interval a_range{-0.43, 0.43};
    Interval sigma2_range{0.3, 1.7};
    Ma1RhoBounds bounds;

    static MA1Model from_series(std::vector<double> series, SubsetScheme scheme,
                                Interval a_range, Interval sigma2_range);

    /// Pseudo data from MA(1) with stationary start u_0 ~ N(0, sigma2).
    static MA1Model synthetic(int n, double a0, double sigma2_0, SubsetScheme scheme,
                              Interval a_range, Interval sigma2_range, RngStream& rng);

    std::vector<double> simulate_series(double a, double sigma2, int len,
                                        RngStream& rng) const;

    std::pair<double, double> link(double a, double sigma2) const;
    std::pair<double, double> link_inverse(double rho1, double rho2) const;
    double jacobian_det(double a) const;

    /// Induced prior density f(a, sigma2) of the uniform-on-rho prior.
    double induced_prior_density(double a, double sigma2) const;
    std::pair<double, double> prior_sample(RngStream& rng) const;

    /// Summary subsets of a series under the scheme; sizes are truncated
    /// to the per-test counts in `counts` when given (one per test).
    std::vector<SummaryData> subset(const std::vector<double>& series) const;

    /// Number of tests under the scheme (2 or 5) and the observed counts.
    int test_count() const;
    std::vector<int> observed_counts() const;

    /// Raw series length needed so test k yields m_k summary values.
    int required_series_length(const std::vector<int>& ms) const;

    /// Test seeds anchored to the observed series (m = n until calibrated).
    std::vector<TestConfig> make_test_configs(double alpha) const;

    /// Conditional log likelihood with u_0 fixed to 0.
    double conditional_loglik(double a, double sigma2) const;

    ModelHooks hooks(const std::vector<int>& ms) const;
};

/// Eq-style bounds for the uniform rho prior from natural theta bounds.
Ma1RhoBounds ma1_rho_bounds(double a_minus, double a_plus, double s2_minus,
                            double s2_plus, double nu1, double nu2);

/// Stride-3 pair subsets and thinned value subsets for a series. Exposed
/// for tests; MA1Model::subset is the user surface.
std::vector<SummaryData> ma1_subset(const std::vector<double>& series,
                                    SubsetScheme scheme);

} // namespace abcstar
