#include "abcstar/calibration.hpp"

#include "abcstar/quadrature.hpp"
#include "abcstar/roots.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace abcstar {

namespace {

bool symmetric_kind(TestKind k) { return k != TestKind::ChiSqDispersion; }

double loglik_peak(const TestConfig& config) {
    return summary_loglik(config, config.rho_star());
}

} // namespace

Interval effective_support(const TestConfig& config, const CalibrationSettings& settings) {
    const double cut = std::log(settings.likelihood_mass_cut);
    const double peak = loglik_peak(config);
    const double star = config.rho_star();
    double lo = settings.rho_support.lo;
    double hi = settings.rho_support.hi;
    if (config.kind == TestKind::ChiSqDispersion && lo <= 0.0) lo = 1e-9;
    auto rel = [&](double r) { return summary_loglik(config, r) - peak - cut; };
    if (lo < star && rel(lo) < 0.0)
        lo = find_root(rel, Interval(lo, star), 1e-10 * (star - lo + 1.0));
    if (hi > star && rel(hi) < 0.0)
        hi = find_root(rel, Interval(star, hi), 1e-10 * (hi - star + 1.0));
    return Interval(lo, hi);
}

double power_mode(const TestConfig& config, const CriticalRegion& region,
                  const CalibrationSettings& settings) {
    const Interval sup = settings.rho_support;
    const bool logspace = config.kind == TestKind::ChiSqDispersion;
    const double lo = logspace ? std::max(sup.lo, 1e-9) : sup.lo;
    const double hi = sup.hi;
    const int grid = 200;
    double best = lo, bestv = -1.0;
    for (int i = 0; i < grid; ++i) {
        const double f = static_cast<double>(i) / (grid - 1);
        const double r = logspace ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo);
        const double v = test_power(config, region, r);
        if (v > bestv) {
            bestv = v;
            best = r;
        }
    }
    if (bestv < 2.0 * config.alpha)
        throw calibration_error("power_mode: power nearly flat (max < 2 alpha)");
    const double step = logspace ? best * (std::pow(hi / lo, 1.0 / (grid - 1)) - 1.0)
                                 : (hi - lo) / (grid - 1);
    const double a = std::max(lo, best - 1.5 * step);
    const double b = std::min(hi, best + 1.5 * step);
    return golden_max([&](double r) { return test_power(config, region, r); }, a, b,
                      settings.epsilon / 10.0);
}

std::pair<double, CriticalRegion> calibrate_tau_minus(TestConfig config,
                                                      const CalibrationSettings& settings) {
    settings.validate(config.alpha);
    const double star = config.rho_star();
    if (symmetric_kind(config.kind)) {
        // symmetric tolerances center the power mode at rho* = 0 exactly
        config.tolerance.tau_minus = -config.tolerance.tau_plus;
        config.tolerance.rho_star = star;
        return {config.tolerance.tau_minus, solve_critical_region(config)};
    }
    if (!(config.tolerance.tau_plus > star))
        throw std::invalid_argument("calibrate_tau_minus: tau+ must exceed rho*");

    auto mode_at = [&](double tau_minus) {
        config.tolerance.tau_minus = tau_minus;
        const CriticalRegion region = solve_critical_region(config);
        return std::make_pair(power_mode(config, region, settings), region);
    };

    double tau_u = star;
    double tau_l = 0.5 * star;
    CriticalRegion region;
    bool bracketed = false;
    for (int i = 0; i < 60; ++i) {
        const auto [mode, reg] = mode_at(tau_l);
        region = reg;
        if (mode < star) {
            bracketed = true;
            break;
        }
        tau_l *= 0.5;
        if (tau_l < 1e-12) break;
    }
    if (!bracketed)
        throw calibration_error("calibrate_tau_minus: bracket expansion exhausted support");

    double tau = tau_l;
    for (int it = 0; it < settings.max_iterations; ++it) {
        tau = 0.5 * (tau_l + tau_u);
        const auto [mode, reg] = mode_at(tau);
        region = reg;
        if (std::fabs(mode - star) < settings.epsilon) break;
        if (mode > star)
            tau_u = tau; // mode right of rho*: raise tau- (Lemma branch)
        else
            tau_l = tau; // complementary branch, required for convergence
    }
    config.tolerance.tau_minus = tau;
    return {tau, region};
}

std::pair<TestConfig, CriticalRegion> calibrate_tau_plus(TestConfig config,
                                                         const CalibrationSettings& settings) {
    settings.validate(config.alpha);
    const double star = config.rho_star();

    auto gamma_at = [&](double tau_plus) {
        config.tolerance.tau_plus = tau_plus;
        const auto [tm, region] = calibrate_tau_minus(config, settings);
        config.tolerance.tau_minus = tm;
        return std::make_pair(test_power(config, region, star), region);
    };

    // gamma(tau+ -> rho*) <= alpha < target, so rho* brackets from below
    double tau_l = symmetric_kind(config.kind) ? 1e-8 : star * (1.0 + 1e-8);
    double tau_u = symmetric_kind(config.kind) ? 0.5 : 2.0 * star;
    CriticalRegion region;
    bool bracketed = false;
    for (int i = 0; i < 60; ++i) {
        const auto [g, reg] = gamma_at(tau_u);
        region = reg;
        if (g > settings.target_power) {
            bracketed = true;
            break;
        }
        tau_u *= symmetric_kind(config.kind) ? 2.0 : 1.5;
        if (!(tau_u < 1e6)) break;
    }
    if (!bracketed)
        throw calibration_error("calibrate_tau_plus: target power unreachable in support");

    for (int it = 0; it < settings.max_iterations; ++it) {
        const double tau = 0.5 * (tau_l + tau_u);
        const auto [g, reg] = gamma_at(tau);
        region = reg;
        if (std::fabs(g - settings.target_power) < settings.epsilon) break;
        if (g < settings.target_power)
            tau_l = tau;
        else
            tau_u = tau;
    }
    return {config, region};
}

double kl_power_vs_likelihood(const TestConfig& config, const CriticalRegion& region,
                              const CalibrationSettings& settings) {
    const Interval sup = effective_support(config, settings);
    const double peak = loglik_peak(config);
    auto lik = [&](double r) { return std::exp(summary_loglik(config, r) - peak); };
    auto pow_ = [&](double r) { return test_power(config, region, r); };

    const double tol = settings.kl_quad_tol;
    const double c_lik = integrate(lik, sup.lo, sup.hi, tol);
    const double c_pow = integrate(pow_, sup.lo, sup.hi, tol);
    if (!(c_lik > 0.0) || !(c_pow > 0.0))
        throw calibration_error("kl_power_vs_likelihood: normalizer not positive");

    auto integrand = [&](double r) {
        const double fl = lik(r) / c_lik;
        if (fl <= 0.0) return 0.0;
        const double fp = std::max(pow_(r) / c_pow, 1e-300);
        return fl * std::log(fl / fp);
    };
    const double kl = integrate(integrand, sup.lo, sup.hi, tol);
    if (!std::isfinite(kl))
        throw calibration_error("kl_power_vs_likelihood: divergent (power vanishes on "
                                "likelihood mass)");
    return kl;
}

namespace {

struct KlAtM {
    const TestConfig* seed;
    const CalibrationSettings* settings;
    std::map<int, double> cache;
    std::map<int, std::pair<TestConfig, CriticalRegion>> cal_cache;

    const std::pair<TestConfig, CriticalRegion>& calibrated(int m) {
        auto it = cal_cache.find(m);
        if (it == cal_cache.end()) {
            TestConfig c = *seed;
            c.m = m;
            it = cal_cache.emplace(m, calibrate_tau_plus(c, *settings)).first;
        }
        return it->second;
    }

    double kl(int m) {
        auto it = cache.find(m);
        if (it == cache.end()) {
            const auto& [cfg, region] = calibrated(m);
            it = cache.emplace(m, kl_power_vs_likelihood(cfg, region, *settings)).first;
        }
        return it->second;
    }

    double kappa(int m) {
        const double k0 = kl(m), k1 = kl(m + 1);
        return (k1 > k0 ? 1.0 : -1.0) * k0;
    }
};

} // namespace

double signed_kl(const TestConfig& config, int m, const CalibrationSettings& settings) {
    KlAtM helper{&config, &settings, {}, {}};
    return helper.kappa(m);
}

CalibrationReport calibrate_at_m(TestConfig config, int m,
                                 const CalibrationSettings& settings) {
    config.m = m;
    auto [cfg, region] = calibrate_tau_plus(config, settings);
    CalibrationReport rep;
    rep.config = cfg;
    rep.critical = region;
    rep.m = m;
    rep.predicted_kl = kl_power_vs_likelihood(cfg, region, settings);
    rep.power_at_rho_star = test_power(cfg, region, cfg.rho_star());
    rep.power_mode = power_mode(cfg, region, settings);
    rep.settings = settings;
    return rep;
}

CalibrationReport calibrate_m(TestConfig config, const CalibrationSettings& settings) {
    settings.validate(config.alpha);
    KlAtM helper{&config, &settings, {}, {}};

    int m_l = config.n;
    bool converged = true;
    int best_m = m_l;
    if (helper.kappa(m_l) > 0.0) {
        best_m = m_l; // KL already increasing at n: m = n
    } else {
        int m_u = 2 * m_l;
        int doublings = 0;
        while (helper.kappa(m_u) < 0.0) {
            if (++doublings > settings.max_m_doublings)
                throw calibration_error("calibrate_m: no sign change after doubling limit");
            m_u *= 2;
        }
        double best_abs = std::numeric_limits<double>::infinity();
        for (int j = 1; j <= settings.max_iterations; ++j) {
            const int m_t = (m_l + m_u) / 2;
            const double k_t = helper.kappa(m_t);
            if (std::fabs(k_t) < best_abs) {
                best_abs = std::fabs(k_t);
                best_m = m_t;
            }
            if (m_u - m_l <= 1) break;
            if (j == settings.max_iterations) {
                converged = false; // iteration budget J exhausted: best so far
                break;
            }
            if (k_t < 0.0)
                m_l = m_t;
            else
                m_u = m_t;
        }
        // the sign flips between adjacent integers; keep whichever side
        // has the smaller |kappa|
        for (int cand : {m_l, m_u}) {
            if (cand >= config.n && std::fabs(helper.kappa(cand)) < best_abs) {
                best_abs = std::fabs(helper.kappa(cand));
                best_m = cand;
            }
        }
    }

    CalibrationReport rep = calibrate_at_m(config, best_m, settings);
    rep.converged = converged;
    return rep;
}

} // namespace abcstar
