#pragma once

#include "abcstar/equivalence.hpp"
#include "abcstar/interval.hpp"


namespace abcstar {

struct calibration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CalibrationSettings {
    double epsilon = 1e-4;      // convergence tolerance on the rho scale
    double target_power = 0.9;  // power pinned at rho* by the tau+ search
    int max_iterations = 100;   // per binary search (J for the m search)
    int max_m_doublings = 12;
    double kl_quad_tol = 1e-10;
    Interval rho_support;                 // rho image of the prior support
    double likelihood_mass_cut = 1e-12;   // support trimmed where mass falls below

    void validate(double alpha) const {
        if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
        if (!(target_power > alpha && target_power < 1.0))
            throw std::invalid_argument("target_power must lie in (alpha, 1)");
        if (!(rho_support.lo < rho_support.hi))
            throw std::invalid_argument("rho_support must be a proper interval");
    }
};

/// Calibrated free parameters of one test, with the KL divergence of the
/// normalized summary likelihood to the normalized power function
/// (epsilon_k) predicted before any sampling.
struct CalibrationReport {
    TestConfig config;       // tolerance holds the calibrated tau-, tau+
    CriticalRegion critical;
    int m = 0;
    double predicted_kl = 0.0;
    double power_at_rho_star = 0.0;
    double power_mode = 0.0;
    bool converged = true;
    CalibrationSettings settings; // all inputs kept so a run can be replayed
};

/// Support actually used by quadrature and mode searches: rho_support
/// intersected with the region where the summary likelihood keeps at
/// least likelihood_mass_cut relative mass.
Interval effective_support(const TestConfig& config, const CalibrationSettings& settings);

/// Maximizer of the power function over the support (coarse grid, then
/// golden-section to epsilon/10). Throws flat-power calibration_error
/// when the maximal power is below 2 alpha.
double power_mode(const TestConfig& config, const CriticalRegion& region,
                  const CalibrationSettings& settings);

/// Lowest-level calibration: tau- such that the power mode sits at rho*
/// for fixed tau+ and m. Symmetric kinds (TOST/TOSZ) return -tau+
/// directly; the chi2 kind runs the binary search with bracket expansion.
std::pair<double, CriticalRegion> calibrate_tau_minus(TestConfig config,
                                                      const CalibrationSettings& settings);

/// Mid-level calibration: tau+ (with tau- recalibrated at every trial)
/// such that power at rho* hits target_power. Returns the updated config
/// and solved region.
std::pair<TestConfig, CriticalRegion> calibrate_tau_plus(TestConfig config,
                                                         const CalibrationSettings& settings);

/// KL divergence of the normalized summary likelihood to the normalized
/// power function for a tau-calibrated test.
double kl_power_vs_likelihood(const TestConfig& config, const CriticalRegion& region,
                              const CalibrationSettings& settings);

/// sign{KL(m+1) - KL(m)} * KL(m), with tau recalibrated at each m.
double signed_kl(const TestConfig& config, int m, const CalibrationSettings& settings);

/// Top-level calibration: m minimizing |signed KL| by the integer binary
/// search started at m_l = n, with tau-, tau+ recalibrated at every trial.
CalibrationReport calibrate_m(TestConfig config, const CalibrationSettings& settings);

/// Full calibration at fixed m (tau searches plus report assembly).
CalibrationReport calibrate_at_m(TestConfig config, int m,
                                 const CalibrationSettings& settings);

} // namespace abcstar
