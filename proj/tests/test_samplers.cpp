#include <doctest.h>

#include "abcstar/calibration.hpp"
#include "abcstar/models.hpp"
#include "abcstar/samplers.hpp"
#include "abcstar/special.hpp"
#include "abcstar/quadrature.hpp"
#include "oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <limits>

using namespace abcstar;

TEST_SUITE_BEGIN("samplers");

namespace {

struct NormalSetup {
    NormalVarianceModel model;
    std::vector<CalibratedTest> tests;
    ModelHooks hooks;
};

NormalSetup calibrated_normal(int m = 107, double tau_minus = 0.58675537109375,
                              double tau_plus = 1.7556152343749994) {
    RngStream data_rng(777, 999);
    NormalSetup s;
    s.model = NormalVarianceModel::synthetic(60, 1.0, Interval(0.2, 4.0), data_rng, true);
    TestConfig cfg = s.model.make_test_config(0.01);
    cfg.m = m;
    cfg.tolerance = {tau_minus, tau_plus, 1.0};
    s.tests = {make_calibrated_test(cfg)};
    s.hooks = s.model.hooks(m);
    return s;
}

} // namespace

TEST_CASE("rejection sampler determinism and accepted-region invariant") {
    const NormalSetup s = calibrated_normal();
    RngStream r1(42, 0), r2(42, 0);
    const SampleSet a = abc_star_rejection(s.hooks, s.tests, 20000, r1);
    const SampleSet b = abc_star_rejection(s.hooks, s.tests, 20000, r2);
    REQUIRE(a.draws.size() == b.draws.size());
    for (std::size_t i = 0; i < a.draws.size(); ++i) {
        CHECK(a.draws[i].theta == b.draws[i].theta);
        CHECK(a.draws[i].z == b.draws[i].z);
        CHECK(a.draws[i].accepted == b.draws[i].accepted);
    }
    CHECK(a.proposals == 20000);
    for (const auto& d : a.draws)
        if (d.accepted) {
            CHECK(d.z[0] >= s.tests[0].critical.c_minus);
            CHECK(d.z[0] <= s.tests[0].critical.c_plus);
        }
}

TEST_CASE("rejection acceptance rate matches quadrature of the power against the prior") {
    const NormalSetup s = calibrated_normal();
    RngStream rng(43, 0);
    const SampleSet out = abc_star_rejection(s.hooks, s.tests, 200000, rng, false);
    // unbiasedness: integral of power over the prior
    const double expected =
        integrate([&](double s2) { return s.tests[0].power(s2 / s.model.sigma2_hat()); },
                  0.2, 4.0, 1e-10) /
        3.8;
    const double se = std::sqrt(expected * (1 - expected) / 200000);
    CHECK(std::fabs(out.acceptance_rate() - expected) < 3.0 * se);
}

TEST_CASE("impossible critical region accepts nothing") {
    NormalSetup s = calibrated_normal();
    s.tests[0].critical = {1e9, 2e9, 0.01};
    RngStream rng(44, 0);
    const SampleSet out = abc_star_rejection(s.hooks, s.tests, 2000, rng, false);
    CHECK(out.accepted == 0);
}

TEST_CASE("standard ABC baseline") {
    const NormalSetup s = calibrated_normal(60, 0.5, 2.0);
    const double var_x = s.model.s2x / (s.model.n - 1);
    std::vector<std::function<double(const std::vector<SummaryData>&)>> dist{
        [var_x](const std::vector<SummaryData>& d) {
            return sample_variance(d[0].set.values) - var_x;
        }};
    RngStream rng(45, 0);
    const SampleSet out = standard_abc_rejection(s.hooks, dist, {Interval(-0.4, 0.4)},
                                                 100000, rng, false);
    CHECK(out.acceptance_rate() == doctest::Approx(0.22).epsilon(0.05));

    // tolerance must contain zero
    CHECK_THROWS_AS(standard_abc_rejection(s.hooks, dist, {Interval(0.1, 0.4)}, 10, rng),
                    std::invalid_argument);

    // infinite tolerance accepts everything (pi_abc = prior)
    RngStream rng2(46, 0);
    const double inf = std::numeric_limits<double>::infinity();
    const SampleSet all = standard_abc_rejection(s.hooks, dist, {Interval(-inf, inf)},
                                                 20000, rng2, false);
    CHECK(all.acceptance_rate() == 1.0);
    // accepted thetas look uniform over the prior (KS)
    std::vector<double> th;
    for (const auto& d : all.draws) th.push_back(d.theta[0]);
    const double ks = oracle::ks_distance(th, [](double v) { return (v - 0.2) / 3.8; });
    CHECK(ks < 1.63 / std::sqrt(20000.0));
}

TEST_CASE("mcmc with always-true indicator reduces to a truncated random walk over the prior") {
    NormalSetup s = calibrated_normal();
    s.tests[0].critical = {-1e12, 1e12, 0.01}; // indicator always true
    const ProposalSpec prop = ProposalSpec::univariate(0.25, Interval(0.2, 4.0));
    AnnealingSettings ann;
    ann.enabled = false;
    RngStream rng(47, 0);
    const Chain chain = abc_star_mcmc(s.hooks, s.tests, prop, 200000, 2000, ann, rng);
    // chain marginal should match the flat prior
    std::vector<double> th;
    for (const auto& st : chain.kept_thetas()) th.push_back(st[0]);
    const double ks = oracle::ks_distance(th, [](double v) { return (v - 0.2) / 3.8; });
    // correlated draws: use an effective-sample-size-deflated bound
    CHECK(ks < 0.02);
    CHECK(chain.states.size() == 200000);
}

TEST_CASE("mcmc chain stays inside the acceptance region and is deterministic") {
    const NormalSetup s = calibrated_normal();
    const ProposalSpec prop = ProposalSpec::univariate(0.09, Interval(0.2, 4.0));
    AnnealingSettings ann; // enabled, default schedule
    RngStream r1(48, 0), r2(48, 0);
    const Chain c1 = abc_star_mcmc(s.hooks, s.tests, prop, 20000, 4000, ann, r1);
    const Chain c2 = abc_star_mcmc(s.hooks, s.tests, prop, 20000, 4000, ann, r2);
    REQUIRE(c1.states.size() == c2.states.size());
    for (std::size_t i = 0; i < c1.states.size(); i += 997)
        CHECK(c1.states[i].theta == c2.states[i].theta);
    for (std::size_t i = c1.burn_in; i < c1.states.size(); ++i) {
        CHECK(c1.states[i].z[0] >= s.tests[0].critical.c_minus - 1e-12);
        CHECK(c1.states[i].z[0] <= s.tests[0].critical.c_plus + 1e-12);
    }
    CHECK(c1.acceptance_rate() > 0.01);
}

TEST_CASE("symmetric untruncated proposal with flat prior reduces to the indicator product") {
    // with prior density constant and no truncation the MH ratio is the
    // indicator alone, so every in-region proposal is accepted
    const NormalSetup s = calibrated_normal();
    const double inf = std::numeric_limits<double>::infinity();
    ModelHooks hooks = s.hooks;
    hooks.prior_density = [](const std::vector<double>&) { return 0.5; };
    hooks.prior_sample = [](RngStream& rng) {
        return std::vector<double>{rng.uniform(0.5, 2.0)};
    };
    hooks.simulate_summaries = [&](const std::vector<double>& th, RngStream& rng) {
        NormalVarianceModel m = s.model;
        SummaryData d;
        d.set = m.simulate(std::fabs(th[0]) + 0.05, 107, rng);
        return std::vector<SummaryData>{d};
    };
    const ProposalSpec prop = ProposalSpec::univariate(0.04, Interval(-inf, inf));
    AnnealingSettings ann;
    ann.enabled = false;
    RngStream rng(49, 0);
    const Chain chain = abc_star_mcmc(hooks, s.tests, prop, 30000, 100, ann, rng);
    // every recorded move either stayed or landed inside the region
    for (std::size_t i = chain.burn_in; i < chain.states.size(); ++i) {
        CHECK(chain.states[i].z[0] >= s.tests[0].critical.c_minus - 1e-12);
        CHECK(chain.states[i].z[0] <= s.tests[0].critical.c_plus + 1e-12);
    }
}

TEST_CASE("ma1 exact posterior mcmc acceptance and reduction") {
    RngStream data_rng(3499, 999);
    MA1Model probe;
    probe.nu1 = 1.0;
    const auto series = probe.simulate_series(0.1, 1.0, 150, data_rng);
    const auto model = MA1Model::from_series(series, SubsetScheme::IgnoreAutocorr,
                                             Interval(-0.43, 0.43), Interval(0.3, 1.7));
    const Chain merged = ma1_exact_posterior_mcmc(model, 40000, 6, 52, 4000, true);
    CHECK(merged.acceptance_rate() == doctest::Approx(0.20).epsilon(0.35));
    CHECK(merged.states.size() == 6 * (40000 - 4000));

    // posterior concentrates near the truth for a well-behaved series
    double ma = 0, ms2 = 0;
    for (const auto& st : merged.states) {
        ma += st.theta[0];
        ms2 += st.theta[1];
    }
    ma /= merged.states.size();
    ms2 /= merged.states.size();
    CHECK(std::fabs(ma - 0.1) < 0.25);
    CHECK(std::fabs(ms2 - 1.0) < 0.4);
}

TEST_CASE("metropolis_hastings targets a known density") {
    // truncated standard normal on [-1, 2]
    auto logt = [](const std::vector<double>& th) {
        if (th[0] < -1.0 || th[0] > 2.0) return -std::numeric_limits<double>::infinity();
        return -0.5 * th[0] * th[0];
    };
    const ProposalSpec prop = ProposalSpec::univariate(1.0, Interval(-1.0, 2.0));
    RngStream rng(53, 0);
    const Chain chain = metropolis_hastings(logt, prop, {0.3}, 400000, 5000, rng);
    std::vector<double> th;
    for (const auto& st : chain.kept_thetas()) th.push_back(st[0]);
    const double z = normal_cdf(2.0) - normal_cdf(-1.0);
    const double ks = oracle::ks_distance(
        th, [&](double v) { return (normal_cdf(v) - normal_cdf(-1.0)) / z; });
    CHECK(ks < 0.02);
}

TEST_SUITE_END();
