#include "abcstar/models.hpp"

#include "abcstar/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace abcstar {

// ---- normal variance model ---------------------------------------------

NormalVarianceModel NormalVarianceModel::from_data(const std::vector<double>& x,
                                                   Interval prior) {
    if (x.size() < 2) throw std::invalid_argument("normal model: need >= 2 observations");
    if (!(prior.lo > 0.0)) throw std::invalid_argument("normal model: prior must be positive");
    NormalVarianceModel m;
    m.n = static_cast<int>(x.size());
    m.prior_support = prior;
    m.s2x = centered_ss(x);
    if (!(m.s2x > 0.0)) throw std::invalid_argument("normal model: degenerate data");
    return m;
}

NormalVarianceModel NormalVarianceModel::synthetic(int n, double sigma2, Interval prior,
                                                   RngStream& rng, bool normalize) {
    std::vector<double> x(n);
    const double sd = std::sqrt(sigma2);
    for (double& v : x) v = sd * rng.normal();
    if (normalize) {
        // rescale so the variance MLE is exactly sigma2
        const double mle = centered_ss(x) / n;
        const double f = std::sqrt(sigma2 / mle);
        for (double& v : x) v *= f;
    }
    return from_data(x, prior);
}

SummarySet NormalVarianceModel::simulate(double sigma2, int m, RngStream& rng) const {
    if (!(sigma2 > 0.0)) throw std::domain_error("normal simulate: sigma2 <= 0");
    SummarySet s;
    s.values.resize(m);
    const double sd = std::sqrt(sigma2);
    for (double& v : s.values) v = sd * rng.normal();
    return s;
}

double NormalVarianceModel::log_posterior_unnorm(double sigma2) const {
    if (!prior_support.contains(sigma2)) return -std::numeric_limits<double>::infinity();
    return -0.5 * n * std::log(sigma2) - 0.5 * s2x / sigma2;
}

double normal_exact_posterior_normalizer(const NormalVarianceModel& model) {
    // normalizer relative to the density peak (the absolute scale cancels
    // everywhere the posterior is used)
    const double peak = model.log_posterior_unnorm(model.exact_map());
    return integrate(
        [&](double s2) { return std::exp(model.log_posterior_unnorm(s2) - peak); },
        model.prior_support.lo, model.prior_support.hi, 1e-12);
}

std::function<double(double)> NormalVarianceModel::exact_posterior() const {
    const NormalVarianceModel self = *this;
    const double map = std::min(std::max(exact_map(), prior_support.lo), prior_support.hi);
    const double peak = self.log_posterior_unnorm(map);
    const double z = integrate(
        [&](double s2) { return std::exp(self.log_posterior_unnorm(s2) - peak); },
        prior_support.lo, prior_support.hi, 1e-12);
    return [self, peak, z](double s2) {
        if (!self.prior_support.contains(s2)) return 0.0;
        return std::exp(self.log_posterior_unnorm(s2) - peak) / z;
    };
}

double NormalVarianceModel::exact_map() const {
    const double interior = s2x / n;
    return std::min(std::max(interior, prior_support.lo), prior_support.hi);
}

TestConfig NormalVarianceModel::make_test_config(double alpha) const {
    TestConfig c;
    c.kind = TestKind::ChiSqDispersion;
    c.n = n;
    c.m = n;
    c.alpha = alpha;
    c.s2x = s2x;
    c.tolerance = {0.5, 2.0, 1.0};
    return c;
}

ModelHooks NormalVarianceModel::hooks(int m, std::uint64_t) const {
    ModelHooks h;
    h.dim = 1;
    const NormalVarianceModel self = *this;
    h.prior_sample = [self](RngStream& rng) {
        return std::vector<double>{rng.uniform(self.prior_support.lo, self.prior_support.hi)};
    };
    h.prior_density = [self](const std::vector<double>& th) {
        return self.prior_support.contains(th[0]) ? 1.0 / self.prior_support.width() : 0.0;
    };
    h.simulate_summaries = [self, m](const std::vector<double>& th, RngStream& rng) {
        SummaryData d;
        d.set = self.simulate(th[0], m, rng);
        return std::vector<SummaryData>{std::move(d)};
    };
    h.link = [self](const std::vector<double>& th) {
        return std::vector<double>{th[0] / self.sigma2_hat()};
    };
    return h;
}

// ---- MA(1) model ---------------------------------------------------------

MA1Model MA1Model::from_series(std::vector<double> series, SubsetScheme scheme,
                               Interval a_range, Interval sigma2_range) {
    if (series.size() < 10) throw std::invalid_argument("ma1: series too short");
    MA1Model m;
    m.n = static_cast<int>(series.size());
    m.x = std::move(series);
    m.nu1 = mle_variance(m.x);
    m.nu2 = lag_autocorrelation(m.x, 1);
    m.scheme = scheme;
    m.a_range = a_range;
    m.sigma2_range = sigma2_range;
    m.bounds = ma1_rho_bounds(a_range.lo, a_range.hi, sigma2_range.lo, sigma2_range.hi,
                              m.nu1, m.nu2);
    return m;
}

MA1Model MA1Model::synthetic(int n, double a0, double sigma2_0, SubsetScheme scheme,
                             Interval a_range, Interval sigma2_range, RngStream& rng) {
    MA1Model tmp;
    tmp.nu1 = 1.0;
    std::vector<double> s = tmp.simulate_series(a0, sigma2_0, n, rng);
    return from_series(std::move(s), scheme, a_range, sigma2_range);
}

std::vector<double> MA1Model::simulate_series(double a, double sigma2, int len,
                                              RngStream& rng) const {
    if (!(sigma2 > 0.0)) throw std::domain_error("ma1 simulate: sigma2 <= 0");
    std::vector<double> out(len);
    const double sd = std::sqrt(sigma2);
    double u_prev = sd * rng.normal(); // stationary start
    for (int t = 0; t < len; ++t) {
        const double u = sd * rng.normal();
        out[t] = u + a * u_prev;
        u_prev = u;
    }
    return out;
}

std::pair<double, double> MA1Model::link(double a, double sigma2) const {
    if (!(nu1 > 0.0)) throw std::domain_error("ma1 link: nu1 <= 0");
    const double rho1 = (1.0 + a * a) * sigma2 / nu1;
    const double rho2 = fisher_z(a / (1.0 + a * a)) - fisher_z(nu2);
    return {rho1, rho2};
}

std::pair<double, double> MA1Model::link_inverse(double rho1, double rho2) const {
    double t = std::tanh(rho2 + fisher_z(nu2));
    if (t > 0.5) t = 0.5;
    if (t < -0.5) t = -0.5;
    double a = 0.0;
    if (std::fabs(t) > 1e-14) a = (1.0 - std::sqrt(std::max(0.0, 1.0 - 4.0 * t * t))) / (2.0 * t);
    const double sigma2 = nu1 * rho1 / (1.0 + a * a);
    return {a, sigma2};
}

double MA1Model::jacobian_det(double a) const {
    if (!(nu1 > 0.0)) throw std::domain_error("ma1 jacobian: nu1 <= 0");
    const double a2 = a * a;
    return (1.0 - a2 * a2) / ((1.0 + a2 + a2 * a2) * nu1);
}

Ma1RhoBounds ma1_rho_bounds(double a_minus, double a_plus, double s2_minus,
                            double s2_plus, double nu1, double nu2) {
    if (!(a_minus < a_plus) || a_minus < -0.5 || a_plus > 0.5)
        throw std::invalid_argument("ma1 rho bounds: a range must lie in [-0.5, 0.5]");
    if (!(s2_minus > 0.0) || !(s2_minus < s2_plus))
        throw std::invalid_argument("ma1 rho bounds: need 0 < s2- < s2+");
    if (!(nu1 > 0.0)) throw std::domain_error("ma1 rho bounds: nu1 <= 0");
    // underline-a minimizes |a| on the range, bar-a maximizes it
    const double a_und = (a_minus <= 0.0 && a_plus >= 0.0)
                             ? 0.0
                             : (std::fabs(a_minus) < std::fabs(a_plus) ? a_minus : a_plus);
    const double a_bar = std::fabs(a_minus) > std::fabs(a_plus) ? a_minus : a_plus;
    Ma1RhoBounds b;
    b.rho1 = Interval((1.0 + a_und * a_und) * s2_minus / nu1,
                      (1.0 + a_bar * a_bar) * s2_plus / nu1);
    const double z2 = fisher_z(nu2);
    b.rho2 = Interval(fisher_z(a_minus / (1.0 + a_minus * a_minus)) - z2,
                      fisher_z(a_plus / (1.0 + a_plus * a_plus)) - z2);
    return b;
}

double MA1Model::induced_prior_density(double a, double sigma2) const {
    if (!(sigma2 > 0.0) || std::fabs(a) > 0.5) return 0.0;
    const auto [rho1, rho2] = link(a, sigma2);
    if (!bounds.rho1.contains(rho1) || !bounds.rho2.contains(rho2)) return 0.0;
    // pushforward of the uniform rho prior: |det dL| / rectangle area
    return jacobian_det(a) / (bounds.rho1.width() * bounds.rho2.width());
}

std::pair<double, double> MA1Model::prior_sample(RngStream& rng) const {
    const double rho1 = rng.uniform(bounds.rho1.lo, bounds.rho1.hi);
    const double rho2 = rng.uniform(bounds.rho2.lo, bounds.rho2.hi);
    return link_inverse(rho1, rho2);
}

namespace {

PairSet stride3_pairs(const std::vector<double>& s, int offset, int max_pairs) {
    PairSet p;
    const int n = static_cast<int>(s.size());
    for (int i = offset; i + 1 < n && p.count() < max_pairs; i += 3) {
        p.first.push_back(s[i]);
        p.second.push_back(s[i + 1]);
    }
    return p;
}

} // namespace

std::vector<SummaryData> ma1_subset(const std::vector<double>& series,
                                    SubsetScheme scheme) {
    const int n = static_cast<int>(series.size());
    if (n < 10) throw std::invalid_argument("ma1_subset: series too short");
    std::vector<SummaryData> out;
    if (scheme == SubsetScheme::IgnoreAutocorr) {
        SummaryData d1;
        d1.set.values = series;
        out.push_back(std::move(d1));
        SummaryData d2;
        d2.pairs.first.assign(series.begin(), series.end() - 1);
        d2.pairs.second.assign(series.begin() + 1, series.end());
        out.push_back(std::move(d2));
    } else {
        SummaryData odd, even;
        for (int i = 0; i < n; i += 2) odd.set.values.push_back(series[i]);
        for (int i = 1; i < n; i += 2) even.set.values.push_back(series[i]);
        out.push_back(std::move(odd));
        out.push_back(std::move(even));
        // stride-3 pair subsets share the common count floor((n-1)/3)
        const int np = (n - 1) / 3;
        for (int o = 0; o < 3; ++o) {
            SummaryData d;
            d.pairs = stride3_pairs(series, o, np);
            out.push_back(std::move(d));
        }
    }
    return out;
}

std::vector<SummaryData> MA1Model::subset(const std::vector<double>& series) const {
    return ma1_subset(series, scheme);
}

int MA1Model::test_count() const {
    return scheme == SubsetScheme::IgnoreAutocorr ? 2 : 5;
}

std::vector<int> MA1Model::observed_counts() const {
    const auto subs = subset(x);
    std::vector<int> counts;
    for (const auto& d : subs)
        counts.push_back(d.set.values.empty() ? d.pairs.count() : d.set.count());
    return counts;
}

int MA1Model::required_series_length(const std::vector<int>& ms) const {
    if (static_cast<int>(ms.size()) != test_count())
        throw std::invalid_argument("ma1: one m per test required");
    int len = 0;
    if (scheme == SubsetScheme::IgnoreAutocorr) {
        len = std::max(ms[0], ms[1] + 1);
    } else {
        len = std::max(2 * ms[0] - 1, 2 * ms[1]);
        for (int k = 2; k < 5; ++k) len = std::max(len, 3 * ms[k] + k - 1);
    }
    return len;
}

std::vector<TestConfig> MA1Model::make_test_configs(double alpha) const {
    const auto subs = subset(x);
    std::vector<TestConfig> out;
    for (const auto& d : subs) {
        TestConfig c;
        c.alpha = alpha;
        if (!d.set.values.empty()) {
            c.kind = TestKind::ChiSqDispersion;
            c.n = d.set.count();
            c.m = c.n;
            c.s2x = centered_ss(d.set.values);
            c.tolerance = {0.5, 2.0, 1.0};
        } else {
            c.kind = TestKind::ToszCorrelation;
            c.n = d.pairs.count();
            c.m = c.n;
            c.rho_hat_x = fisher_z(pearson_r(d.pairs));
            c.tolerance = {-0.3, 0.3, 0.0};
        }
        out.push_back(c);
    }
    return out;
}

double MA1Model::conditional_loglik(double a, double sigma2) const {
    if (!(sigma2 > 0.0)) throw std::domain_error("ma1 loglik: sigma2 <= 0");
    double u = 0.0; // u_0 fixed to 0
    double ss = 0.0;
    for (double xt : x) {
        u = xt - a * u;
        ss += u * u;
    }
    return -0.5 * n * std::log(sigma2) - 0.5 * ss / sigma2;
}

ModelHooks MA1Model::hooks(const std::vector<int>& ms) const {
    const MA1Model self = *this;
    const int len = required_series_length(ms);
    ModelHooks h;
    h.dim = 2;
    h.prior_sample = [self](RngStream& rng) {
        const auto [a, s2] = self.prior_sample(rng);
        return std::vector<double>{a, s2};
    };
    h.prior_density = [self](const std::vector<double>& th) {
        return self.induced_prior_density(th[0], th[1]);
    };
    h.simulate_summaries = [self, ms, len](const std::vector<double>& th, RngStream& rng) {
        const auto series = self.simulate_series(th[0], th[1], len, rng);
        auto subs = self.subset(series);
        for (std::size_t k = 0; k < subs.size(); ++k) {
            // truncate to the calibrated per-test counts
            auto& d = subs[k];
            const int want = ms[k];
            if (!d.set.values.empty()) {
                if (d.set.count() < want)
                    throw std::logic_error("ma1 hooks: series too short for m");
                d.set.values.resize(want);
            } else {
                if (d.pairs.count() < want)
                    throw std::logic_error("ma1 hooks: too few pairs for m");
                d.pairs.first.resize(want);
                d.pairs.second.resize(want);
            }
        }
        return subs;
    };
    h.link = [self](const std::vector<double>& th) {
        const auto [r1, r2] = self.link(th[0], th[1]);
        if (self.scheme == SubsetScheme::IgnoreAutocorr)
            return std::vector<double>{r1, r2};
        return std::vector<double>{r1, r1, r2, r2, r2};
    };
    return h;
}

} // namespace abcstar
