#pragma once

#include "abcstar/interval.hpp"
#include "abcstar/rng.hpp"
#include "abcstar/summary.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace abcstar {

struct degenerate_data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct no_solution_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class TestKind { ChiSqDispersion, TostLocation, ToszCorrelation };

const char* test_kind_name(TestKind k);
TestKind test_kind_from_name(const std::string& name);

/// Equivalence region [tau-, tau+] containing the point of equality.
struct ToleranceRegion {
    double tau_minus = 0.0;
    double tau_plus = 0.0;
    double rho_star = 0.0;
};

/// Critical region of an equivalence test: the test rejects its null
/// (the ABC proposal is accepted) when the statistic falls in [c-, c+].
struct CriticalRegion {
    double c_minus = 0.0;
    double c_plus = 0.0;
    double alpha = 0.0;
};

/// One univariate equivalence test: kind, sample sizes, level, tolerance
/// region and the observed-data anchors its statistic is computed
/// against. For TOST the aux statistic sigma_hat is the scale plug-in;
/// for TOSZ, n is the thinned observed pair count and m the thinned
/// simulated pair count.
struct TestConfig {
    TestKind kind = TestKind::ChiSqDispersion;
    int n = 0;
    int m = 0;
    double alpha = 0.01;
    ToleranceRegion tolerance;

    double sigma_hat = 1.0; // TOST scale plug-in
    double s2x = 0.0;       // chi2: centered sum of squares of observed data
    double mu_hat_x = 0.0;  // TOST: observed mean MLE
    double rho_hat_x = 0.0; // TOSZ: Fisher z of the observed pair correlation

    double rho_star() const { return kind == TestKind::ChiSqDispersion ? 1.0 : 0.0; }

    void validate() const;
};

/// Per-test simulated data handed to the statistics: values for the
/// dispersion/location kinds, pairs for the correlation kind.
struct SummaryData {
    SummarySet set;
    PairSet pairs;
};

// ---- chi^2 dispersion test -------------------------------------------

/// T(y) = S^2(y) / S^2(x), centered sums of squares.
double chi2_stat(const SummarySet& sim, const SummarySet& obs);

/// Simultaneous solution of the two size-alpha constraints at tau- and
/// tau+. n is the observed count, m the simulated count (df = m-1).
CriticalRegion chi2_critical_region(int n, int m, double alpha,
                                    const ToleranceRegion& tol);

/// F_{chi2,m-1}(n c+/rho) - F_{chi2,m-1}(n c-/rho), clipped to [0,1].
double chi2_power(double rho, const CriticalRegion& region, int n, int m);

/// Log density of the observed data as a function of rho = sigma^2 /
/// sigma_hat_x^2 (change of variables through S^2(x)/sigma^2 ~ chi^2_n;
/// maximized at rho = 1 by the MLE property of sigma_hat_x^2 = s2x/n).
double chi2_summary_loglik(double rho, int n, double s2x);

// ---- TOST location test ----------------------------------------------

/// Two one-sided statistics (T-, T+); rejection (= ABC acceptance) iff
/// T+ < t_{alpha,m-1} and T- > t_{1-alpha,m-1}.
std::pair<double, double> tost_stat(const SummarySet& sim, double mu_hat_x,
                                    const ToleranceRegion& tol);

/// Rejection event as an interval on z = s_bar_y - mu_hat_x.
CriticalRegion tost_critical_region(const ToleranceRegion& tol, int m,
                                    double sigma_hat, double alpha);

/// Noncentral-t power approximation with the sigma_hat plug-in
/// (symmetric tolerances). Measured accuracy vs the exact test: within
/// ~1e-2 absolute for m >= 14 and within 3 binomial SE of 1e5
/// replicates for m >= ~150.
double tost_power(double rho, double tau_plus, int m, double sigma_hat, double alpha);

/// Log density of the observed mean anchor as a function of rho.
double tost_summary_loglik(double rho, int n, double sigma_hat);

// ---- TOSZ correlation test -------------------------------------------

/// Fisher-z statistics for thinned simulated pair correlations.
std::pair<double, double> tosz_stat(const PairSet& sim_pairs, double rho_hat_x,
                                    const ToleranceRegion& tol);

/// Rejection event as an interval on z = z_y - rho_hat_x.
CriticalRegion tosz_critical_region(const ToleranceRegion& tol, int m_tilde,
                                    double alpha);

/// Normal-approximation power, variance 1/(m_tilde - 3).
double tosz_power(double rho, double tau_plus, int m_tilde, double alpha);

/// Log density of the observed Fisher-z anchor as a function of rho.
double tosz_summary_loglik(double rho, int n_tilde);

// ---- unified dispatch --------------------------------------------------

/// Critical region for any kind (z-space interval for TOST/TOSZ, using
/// the reference sigma_hat for TOST).
CriticalRegion solve_critical_region(const TestConfig& config);

double test_power(const TestConfig& config, const CriticalRegion& region, double rho);

double summary_loglik(const TestConfig& config, double rho);

/// One test ready for sampling: configuration plus solved region.
/// evaluate() computes the scalar z statistic and the acceptance
/// interval for one simulated draw, recomputing the TOST interval from
/// the draw's own sigma_hat_y (the aux-dependent recalibration hook).
struct CalibratedTest {
    TestConfig config;
    CriticalRegion critical;

    struct Evaluation {
        double z = 0.0;
        double c_minus = 0.0;
        double c_plus = 0.0;
        bool degenerate = false; // zero variance / |r| = 1: auto-reject
        bool accepted = false;
    };

    Evaluation evaluate(const SummaryData& sim) const;
    double power(double rho) const { return test_power(config, critical, rho); }
    double loglik(double rho) const { return summary_loglik(config, rho); }
};

CalibratedTest make_calibrated_test(TestConfig config);

/// Intersection acceptance: true iff every univariate test rejected its
/// null. No multiplicity adjustment.
bool composite_accept(const std::vector<bool>& decisions);

/// Product of univariate powers, one rho per test.
double composite_power(const std::vector<double>& rhos,
                       const std::vector<CalibratedTest>& tests);

/// Simulated summary data for a single test at a given rho (the per-test
/// generative path used by Monte Carlo size/power checks).
SummaryData simulate_summary_data(const TestConfig& config, double rho, RngStream& rng);

} // namespace abcstar
