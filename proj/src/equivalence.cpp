#include "abcstar/equivalence.hpp"

#include "abcstar/roots.hpp"
#include "abcstar/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace abcstar {

namespace {

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

constexpr double kLog2Pi = 1.8378770664093454836;

} // namespace

const char* test_kind_name(TestKind k) {
    switch (k) {
        case TestKind::ChiSqDispersion: return "chi2_dispersion";
        case TestKind::TostLocation: return "tost_location";
        case TestKind::ToszCorrelation: return "tosz_correlation";
    }
    return "?";
}

TestKind test_kind_from_name(const std::string& name) {
    if (name == "chi2_dispersion") return TestKind::ChiSqDispersion;
    if (name == "tost_location") return TestKind::TostLocation;
    if (name == "tosz_correlation") return TestKind::ToszCorrelation;
    throw std::invalid_argument("unknown test kind: " + name);
}

void TestConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha outside (0, 0.5)");
    if (n < 2 || m < 2) throw std::invalid_argument("test requires n >= 2 and m >= 2");
    if (kind == TestKind::ToszCorrelation && (n < 4 || m < 4))
        throw std::invalid_argument("TOSZ requires thinned counts >= 4");
    if (kind == TestKind::ChiSqDispersion && !(s2x > 0.0))
        throw std::invalid_argument("chi2 test requires s2x > 0");
    if (!(tolerance.tau_minus <= rho_star() && rho_star() <= tolerance.tau_plus))
        throw std::invalid_argument("tolerance region must contain the point of equality");
}

// ---- chi^2 dispersion test -------------------------------------------

double chi2_stat(const SummarySet& sim, const SummarySet& obs) {
    if (sim.count() < 2 || obs.count() < 2)
        throw std::invalid_argument("chi2_stat: counts must be >= 2");
    const double ssx = centered_ss(obs.values);
    if (ssx <= 0.0) throw degenerate_data_error("chi2_stat: S^2(x) = 0");
    return centered_ss(sim.values) / ssx;
}

CriticalRegion chi2_critical_region(int n, int m, double alpha,
                                    const ToleranceRegion& tol) {
    if (!(tol.tau_minus > 0.0) || !(tol.tau_minus < tol.tau_plus))
        throw std::invalid_argument("chi2_critical_region: need 0 < tau- < tau+");
    const int df = m - 1;
    const double nn = static_cast<double>(n);
    // for fixed c-, each size equation pins c+ by quantile inversion
    auto cplus_for = [&](double cm, double tau) {
        const double p = alpha + chi2_cdf(nn * cm / tau, df);
        if (p >= 1.0) return std::numeric_limits<double>::infinity();
        return tau * chi2_quantile(p, df) / nn;
    };
    auto gap = [&](double cm) { return cplus_for(cm, tol.tau_plus) - cplus_for(cm, tol.tau_minus); };

    const double hi = tol.tau_minus * chi2_quantile(1.0 - alpha, df) / nn * (1.0 - 1e-12);
    const double lo = hi * 1e-12;
    if (!(gap(lo) > 0.0) || !(gap(hi) < 0.0))
        throw no_solution_error("chi2_critical_region: size curves do not cross");
    const double cm = find_root(gap, Interval(lo, hi), 1e-13);
    CriticalRegion region{cm, cplus_for(cm, tol.tau_plus), alpha};

    const double r1 = chi2_cdf(nn * region.c_plus / tol.tau_plus, df) -
                      chi2_cdf(nn * region.c_minus / tol.tau_plus, df) - alpha;
    const double r2 = chi2_cdf(nn * region.c_plus / tol.tau_minus, df) -
                      chi2_cdf(nn * region.c_minus / tol.tau_minus, df) - alpha;
    if (std::fabs(r1) > 1e-8 || std::fabs(r2) > 1e-8)
        throw no_solution_error("chi2_critical_region: residuals above tolerance");
    return region;
}

double chi2_power(double rho, const CriticalRegion& region, int n, int m) {
    if (!(rho > 0.0)) throw std::domain_error("chi2_power: rho must be positive");
    const int df = m - 1;
    const double nn = static_cast<double>(n);
    return clip01(chi2_cdf(nn * region.c_plus / rho, df) -
                  chi2_cdf(nn * region.c_minus / rho, df));
}

double chi2_summary_loglik(double rho, int n, double s2x) {
    if (!(rho > 0.0) || !(s2x > 0.0))
        throw std::domain_error("chi2_summary_loglik: rho and s2x must be positive");
    const double nn = static_cast<double>(n);
    // density of S^2(x) at s2x when S^2/sigma^2 ~ chi^2_n, sigma^2 = rho s2x/n
    return std::log(nn / (rho * s2x)) + chi2_logpdf(nn / rho, n);
}

// ---- TOST location test ----------------------------------------------

std::pair<double, double> tost_stat(const SummarySet& sim, double mu_hat_x,
                                    const ToleranceRegion& tol) {
    if (sim.count() < 2) throw std::invalid_argument("tost_stat: need >= 2 values");
    const double sd = sample_sd(sim.values);
    if (sd <= 0.0) throw degenerate_data_error("tost_stat: sigma_hat_y = 0");
    const double se = sd / std::sqrt(static_cast<double>(sim.count()));
    const double sbar = mean(sim.values);
    return {(sbar - mu_hat_x - tol.tau_minus) / se, (sbar - mu_hat_x - tol.tau_plus) / se};
}

CriticalRegion tost_critical_region(const ToleranceRegion& tol, int m, double sigma_hat,
                                    double alpha) {
    const double se = sigma_hat / std::sqrt(static_cast<double>(m));
    const double t_alpha = student_t_quantile(alpha, m - 1); // negative
    return {tol.tau_minus - se * t_alpha, tol.tau_plus + se * t_alpha, alpha};
}

double tost_power(double rho, double tau_plus, int m, double sigma_hat, double alpha) {
    if (m < 2) throw std::domain_error("tost_power: m < 2");
    if (!(sigma_hat > 0.0)) throw std::domain_error("tost_power: sigma_hat <= 0");
    const int df = m - 1;
    const double se = sigma_hat / std::sqrt(static_cast<double>(m));
    const double t_alpha = student_t_quantile(alpha, df);
    const double ncp = std::sqrt(static_cast<double>(m)) * rho / sigma_hat;
    return clip01(student_t_cdf(tau_plus / se + t_alpha, df, ncp) -
                  student_t_cdf(-tau_plus / se - t_alpha, df, ncp));
}

double tost_summary_loglik(double rho, int n, double sigma_hat) {
    if (!(sigma_hat > 0.0)) throw std::domain_error("tost_summary_loglik: sigma_hat <= 0");
    const double nn = static_cast<double>(n);
    return -0.5 * nn * rho * rho / (sigma_hat * sigma_hat) +
           0.5 * (std::log(nn) - kLog2Pi) - std::log(sigma_hat);
}

// ---- TOSZ correlation test -------------------------------------------

std::pair<double, double> tosz_stat(const PairSet& sim_pairs, double rho_hat_x,
                                    const ToleranceRegion& tol) {
    if (sim_pairs.count() < 4) throw std::invalid_argument("tosz_stat: need >= 4 pairs");
    double r;
    try {
        r = pearson_r(sim_pairs);
    } catch (const std::invalid_argument&) {
        throw degenerate_data_error("tosz_stat: degenerate pairs");
    }
    if (std::fabs(r) >= 1.0) throw degenerate_data_error("tosz_stat: |r| = 1");
    const double z = fisher_z(r);
    const double se = 1.0 / std::sqrt(static_cast<double>(sim_pairs.count()) - 3.0);
    return {(z - rho_hat_x - tol.tau_minus) / se, (z - rho_hat_x - tol.tau_plus) / se};
}

CriticalRegion tosz_critical_region(const ToleranceRegion& tol, int m_tilde, double alpha) {
    if (m_tilde < 4) throw std::invalid_argument("tosz_critical_region: m_tilde < 4");
    const double se = 1.0 / std::sqrt(static_cast<double>(m_tilde) - 3.0);
    const double u_alpha = normal_quantile(alpha); // negative
    return {tol.tau_minus - se * u_alpha, tol.tau_plus + se * u_alpha, alpha};
}

double tosz_power(double rho, double tau_plus, int m_tilde, double alpha) {
    if (m_tilde < 4) throw std::domain_error("tosz_power: m_tilde < 4");
    const double s = std::sqrt(static_cast<double>(m_tilde) - 3.0);
    const double u_alpha = normal_quantile(alpha);
    return clip01(normal_cdf((tau_plus - rho) * s + u_alpha) -
                  normal_cdf(-(tau_plus + rho) * s - u_alpha));
}

double tosz_summary_loglik(double rho, int n_tilde) {
    if (n_tilde < 4) throw std::domain_error("tosz_summary_loglik: n_tilde < 4");
    const double prec = static_cast<double>(n_tilde) - 3.0;
    return -0.5 * prec * rho * rho + 0.5 * (std::log(prec) - kLog2Pi);
}

// ---- unified dispatch --------------------------------------------------

CriticalRegion solve_critical_region(const TestConfig& config) {
    config.validate();
    switch (config.kind) {
        case TestKind::ChiSqDispersion:
            return chi2_critical_region(config.n, config.m, config.alpha, config.tolerance);
        case TestKind::TostLocation:
            return tost_critical_region(config.tolerance, config.m, config.sigma_hat,
                                        config.alpha);
        case TestKind::ToszCorrelation:
            return tosz_critical_region(config.tolerance, config.m, config.alpha);
    }
    throw std::logic_error("unreachable");
}

double test_power(const TestConfig& config, const CriticalRegion& region, double rho) {
    switch (config.kind) {
        case TestKind::ChiSqDispersion:
            return chi2_power(rho, region, config.n, config.m);
        case TestKind::TostLocation:
            return tost_power(rho, config.tolerance.tau_plus, config.m, config.sigma_hat,
                              config.alpha);
        case TestKind::ToszCorrelation:
            return tosz_power(rho, config.tolerance.tau_plus, config.m, config.alpha);
    }
    throw std::logic_error("unreachable");
}

double summary_loglik(const TestConfig& config, double rho) {
    switch (config.kind) {
        case TestKind::ChiSqDispersion:
            return chi2_summary_loglik(rho, config.n, config.s2x);
        case TestKind::TostLocation:
            return tost_summary_loglik(rho, config.n, config.sigma_hat);
        case TestKind::ToszCorrelation:
            return tosz_summary_loglik(rho, config.n);
    }
    throw std::logic_error("unreachable");
}

CalibratedTest::Evaluation CalibratedTest::evaluate(const SummaryData& sim) const {
    Evaluation ev;
    ev.c_minus = critical.c_minus;
    ev.c_plus = critical.c_plus;
    try {
        switch (config.kind) {
            case TestKind::ChiSqDispersion: {
                if (centered_ss(sim.set.values) <= 0.0)
                    throw degenerate_data_error("zero simulated variance");
                ev.z = centered_ss(sim.set.values) / config.s2x;
                break;
            }
            case TestKind::TostLocation: {
                const double sd = sample_sd(sim.set.values);
                if (sd <= 0.0) throw degenerate_data_error("zero simulated variance");
                ev.z = mean(sim.set.values) - config.mu_hat_x;
                // interval depends on the draw's own scale estimate
                const CriticalRegion r =
                    tost_critical_region(config.tolerance, config.m, sd, config.alpha);
                ev.c_minus = r.c_minus;
                ev.c_plus = r.c_plus;
                break;
            }
            case TestKind::ToszCorrelation: {
                const double r = pearson_r(sim.pairs);
                if (std::fabs(r) >= 1.0) throw degenerate_data_error("|r| = 1");
                ev.z = fisher_z(r) - config.rho_hat_x;
                break;
            }
        }
    } catch (const degenerate_data_error&) {
        // measure-zero draws under the auxiliary models: reject, don't abort
        ev.degenerate = true;
        ev.accepted = false;
        return ev;
    } catch (const std::invalid_argument&) {
        ev.degenerate = true;
        ev.accepted = false;
        return ev;
    }
    ev.accepted = ev.z >= ev.c_minus && ev.z <= ev.c_plus;
    return ev;
}

CalibratedTest make_calibrated_test(TestConfig config) {
    CalibratedTest t;
    t.critical = solve_critical_region(config);
    t.config = std::move(config);
    return t;
}

bool composite_accept(const std::vector<bool>& decisions) {
    if (decisions.empty()) throw std::invalid_argument("composite_accept: no decisions");
    return std::all_of(decisions.begin(), decisions.end(), [](bool b) { return b; });
}

double composite_power(const std::vector<double>& rhos,
                       const std::vector<CalibratedTest>& tests) {
    if (rhos.size() != tests.size())
        throw std::invalid_argument("composite_power: dimension mismatch");
    double p = 1.0;
    for (std::size_t k = 0; k < tests.size(); ++k) p *= tests[k].power(rhos[k]);
    return p;
}

SummaryData simulate_summary_data(const TestConfig& config, double rho, RngStream& rng) {
    SummaryData out;
    switch (config.kind) {
        case TestKind::ChiSqDispersion: {
            const double sigma = std::sqrt(rho * config.s2x / config.n);
            out.set.values.resize(config.m);
            for (double& v : out.set.values) v = sigma * rng.normal();
            break;
        }
        case TestKind::TostLocation: {
            out.set.values.resize(config.m);
            for (double& v : out.set.values)
                v = config.mu_hat_x + rho + config.sigma_hat * rng.normal();
            break;
        }
        case TestKind::ToszCorrelation: {
            const double q = std::tanh(config.rho_hat_x + rho);
            const double c = std::sqrt(1.0 - q * q);
            out.pairs.first.resize(config.m);
            out.pairs.second.resize(config.m);
            for (int i = 0; i < config.m; ++i) {
                const double z1 = rng.normal();
                out.pairs.first[i] = z1;
                out.pairs.second[i] = q * z1 + c * rng.normal();
            }
            break;
        }
    }
    return out;
}

} // namespace abcstar
