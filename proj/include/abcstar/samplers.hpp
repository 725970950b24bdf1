#pragma once

#include "abcstar/equivalence.hpp"
#include "abcstar/models.hpp"
#include "abcstar/rng.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace abcstar {

struct Draw {
    std::vector<double> theta;
    std::vector<double> z;
    bool accepted = false;
};

struct SampleSet {
    std::vector<Draw> draws;
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;
    std::uint64_t degenerate = 0; // simulation failures, counted as rejections

    double acceptance_rate() const {
        return proposals ? static_cast<double>(accepted) / proposals : 0.0;
    }
    std::vector<std::vector<double>> accepted_thetas() const;
};

/// Gaussian random-walk proposal, truncated to a per-dimension support
/// box. Proposals are redrawn until inside the box and the MH ratio
/// carries the q-correction Z(theta)/Z(theta') from the truncated
/// normalization.
struct ProposalSpec {
    std::vector<double> covariance;       // row-major d x d
    std::vector<Interval> support;        // per-dimension truncation
    int dim = 0;

    static ProposalSpec bivariate(double var0, double var1, double cov, Interval s0,
                                  Interval s1);
    static ProposalSpec univariate(double var, Interval s);
};

struct Chain {
    std::vector<Draw> states; // one per iteration, post-annealed region
    std::uint64_t iterations = 0;
    std::uint64_t accepted_moves = 0;
    int burn_in = 0;
    std::string annealing_schedule;

    double acceptance_rate() const {
        return iterations ? static_cast<double>(accepted_moves) / iterations : 0.0;
    }
    /// States after burn-in.
    std::vector<std::vector<double>> kept_thetas() const;
};

struct AnnealingSettings {
    bool enabled = true;
    double start_inflation = 2.0; // tolerance half-width / covariance factor at stage 0
    int stages = 50;              // geometric decay over burn-in
    double decay = 0.9;
};

/// Calibrated ABC rejection sampler: exactly N proposals from the prior,
/// each scored by the composite equivalence acceptance.
SampleSet abc_star_rejection(const ModelHooks& model,
                             const std::vector<CalibratedTest>& tests, std::uint64_t N,
                             RngStream& rng, bool keep_rejected = true);

/// ABC Metropolis-Hastings with the indicator-product acceptance ratio,
/// truncated-Gaussian proposals (q-ratio corrected) and tolerance /
/// covariance annealing during burn-in with the critical regions
/// re-solved at every annealing stage.
Chain abc_star_mcmc(const ModelHooks& model, const std::vector<CalibratedTest>& tests,
                    const ProposalSpec& proposal, std::uint64_t iterations, int burn_in,
                    const AnnealingSettings& annealing, RngStream& rng);

/// Standard ABC baseline: raw summary-statistic differences against
/// user-fixed tolerance intervals.
SampleSet standard_abc_rejection(
    const ModelHooks& model,
    const std::vector<std::function<double(const std::vector<SummaryData>&)>>& distances,
    const std::vector<Interval>& tolerances, std::uint64_t N, RngStream& rng,
    bool keep_rejected = true);

/// Generic MH on a log target with truncated-Gaussian proposals; used by
/// the exact-posterior oracles.
Chain metropolis_hastings(const std::function<double(const std::vector<double>&)>& log_target,
                          const ProposalSpec& proposal, std::vector<double> init,
                          std::uint64_t iterations, int burn_in, RngStream& rng);

/// Exact-posterior MCMC for the MA(1) model (conditional likelihood with
/// u_0 = 0), the paper's proposal covariance, several chains merged in
/// stream order.
Chain ma1_exact_posterior_mcmc(const MA1Model& model, std::uint64_t iters_per_chain,
                               int n_chains, std::uint64_t seed, int burn_in,
                               bool flat_prior = false);

} // namespace abcstar
