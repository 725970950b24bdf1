#pragma once

#include "abcstar/equivalence.hpp"
#include "abcstar/interval.hpp"
#include "abcstar/rng.hpp"

#include <array>
#include <functional>
#include <vector>

namespace abcstar {

struct insufficient_samples_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Post-run accuracy metrics serialized next to sampler output.
struct AccuracyReport {
    double kl_divergence = 0.0;
    double kl_floor = 0.0; // measured self-consistency floor of the estimator
    std::vector<double> map_estimate;
    double map_squared_error = 0.0;
    double acceptance_rate = 0.0;
    double tp_lower_bound = 0.0;
};

/// Exact per-bin probabilities of a normalized density by quadrature on a
/// fixed binning of the support.
std::vector<double> density_bin_probabilities(const std::function<double(double)>& density,
                                              Interval support, int bins);

/// Histogram bin probabilities of samples; when floor_zero_bins is set,
/// empty bins receive mass 0.5/N (the declared zero-bin floor).
std::vector<double> histogram_probabilities(const std::vector<double>& samples,
                                            Interval support, int bins,
                                            bool floor_zero_bins);

/// sum_b q_b log(q_b / p_b) over bins with q_b > 0.
double kl_between_bins(const std::vector<double>& q, const std::vector<double>& p);

/// KL divergence of the ABC sample histogram (100 bins over the support)
/// to the exact normalized density. Requires >= 1000 samples.
double kl_from_samples(const std::vector<double>& samples,
                       const std::function<double(double)>& exact_density,
                       Interval support, int bins = 100);

/// 2-D variant against per-bin reference probabilities (e.g. an oracle
/// chain histogram on the same binning, zero bins floored).
double kl_from_samples_2d(const std::vector<std::vector<double>>& samples,
                          const std::vector<double>& reference_probs, Interval support0,
                          Interval support1, int bins = 100);

std::vector<double> histogram_probabilities_2d(const std::vector<std::vector<double>>& samples,
                                               Interval support0, Interval support1,
                                               int bins, bool floor_zero_bins);

/// Mode of a Gaussian KDE with Silverman plug-in bandwidth (1-D), or of a
/// product-kernel KDE on a grid (2-D). Requires >= 1000 samples.
struct MapEstimate {
    std::vector<double> location;
    std::vector<double> bandwidth; // plug-in value recorded in output
};
MapEstimate map_from_samples(const std::vector<std::vector<double>>& samples,
                             const std::vector<Interval>& support);
MapEstimate map_from_samples_1d(const std::vector<double>& samples, Interval support);

/// 1 - alpha / acceptance_prob, clamped at 0.
double tp_lower_bound(double alpha, double acceptance_prob);

/// Monte Carlo rejection frequency of a calibrated test at a boundary rho.
double empirical_size(const CalibratedTest& test, double rho, int reps, RngStream& rng);

/// Draws from a 1-D density by inverse-CDF on a dense grid (used to
/// measure estimator floors).
std::vector<double> sample_from_density(const std::function<double(double)>& density,
                                        Interval support, int n, RngStream& rng);

} // namespace abcstar
