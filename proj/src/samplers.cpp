#include "abcstar/samplers.hpp"

#include "abcstar/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace abcstar {

std::vector<std::vector<double>> SampleSet::accepted_thetas() const {
    std::vector<std::vector<double>> out;
    out.reserve(accepted);
    for (const auto& d : draws)
        if (d.accepted) out.push_back(d.theta);
    return out;
}

std::vector<std::vector<double>> Chain::kept_thetas() const {
    std::vector<std::vector<double>> out;
    for (std::size_t i = burn_in; i < states.size(); ++i) out.push_back(states[i].theta);
    return out;
}

ProposalSpec ProposalSpec::bivariate(double var0, double var1, double cov, Interval s0,
                                     Interval s1) {
    ProposalSpec p;
    p.dim = 2;
    p.covariance = {var0, cov, cov, var1};
    p.support = {s0, s1};
    return p;
}

ProposalSpec ProposalSpec::univariate(double var, Interval s) {
    ProposalSpec p;
    p.dim = 1;
    p.covariance = {var};
    p.support = {s};
    return p;
}

namespace {

struct CholeskyProposal {
    int dim;
    std::vector<double> chol; // lower-triangular, row-major
    std::vector<Interval> support;
    double corr = 0.0; // dim 2 only
    std::vector<double> sds;

    explicit CholeskyProposal(const ProposalSpec& spec, double scale = 1.0) {
        dim = spec.dim;
        support = spec.support;
        if (dim == 1) {
            sds = {std::sqrt(spec.covariance[0] * scale)};
            chol = {sds[0]};
        } else if (dim == 2) {
            const double v0 = spec.covariance[0] * scale;
            const double v1 = spec.covariance[3] * scale;
            const double c = spec.covariance[1] * scale;
            sds = {std::sqrt(v0), std::sqrt(v1)};
            corr = c / (sds[0] * sds[1]);
            const double l00 = sds[0];
            const double l10 = c / l00;
            const double l11 = std::sqrt(v1 - l10 * l10);
            chol = {l00, 0.0, l10, l11};
        } else {
            throw std::invalid_argument("proposal: only dim 1 or 2 supported");
        }
    }

    // probability mass the untruncated kernel puts inside the support box
    double box_mass(const std::vector<double>& center) const {
        auto lim = [&](int k, double v) { return (v - center[k]) / sds[k]; };
        if (dim == 1) {
            const double lo = support[0].lo, hi = support[0].hi;
            const double a = std::isinf(lo) ? -40.0 : lim(0, lo);
            const double b = std::isinf(hi) ? 40.0 : lim(0, hi);
            return normal_cdf(b) - normal_cdf(a);
        }
        auto bound = [&](int k, double v, double sign) {
            if (std::isinf(v)) return sign * 40.0;
            return lim(k, v);
        };
        return bvn_rect_prob(bound(0, support[0].lo, -1), bound(0, support[0].hi, 1),
                             bound(1, support[1].lo, -1), bound(1, support[1].hi, 1), corr);
    }

    bool inside(const std::vector<double>& th) const {
        for (int k = 0; k < dim; ++k) {
            const double lo = support[k].lo, hi = support[k].hi;
            if (!std::isinf(lo) && th[k] < lo) return false;
            if (!std::isinf(hi) && th[k] > hi) return false;
        }
        return true;
    }

    // redraw until inside the box (truncated kernel)
    bool draw(const std::vector<double>& center, RngStream& rng,
              std::vector<double>& out) const {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            if (dim == 1) {
                out[0] = center[0] + chol[0] * rng.normal();
            } else {
                const double z0 = rng.normal(), z1 = rng.normal();
                out[0] = center[0] + chol[0] * z0;
                out[1] = center[1] + chol[2] * z0 + chol[3] * z1;
            }
            if (inside(out)) return true;
        }
        return false;
    }
};

} // namespace

SampleSet abc_star_rejection(const ModelHooks& model,
                             const std::vector<CalibratedTest>& tests, std::uint64_t N,
                             RngStream& rng, bool keep_rejected) {
    if (tests.empty()) throw std::invalid_argument("abc_star_rejection: no tests");
    SampleSet out;
    if (keep_rejected) out.draws.reserve(N);
    std::vector<double> z(tests.size());
    for (std::uint64_t i = 0; i < N; ++i) {
        const std::vector<double> theta = model.prior_sample(rng);
        bool ok = true, degen = false;
        std::vector<SummaryData> sims;
        try {
            sims = model.simulate_summaries(theta, rng);
        } catch (const std::exception&) {
            degen = true; // model failure recorded and counted as rejection
        }
        if (!degen) {
            for (std::size_t k = 0; k < tests.size(); ++k) {
                const auto ev = tests[k].evaluate(sims[k]);
                z[k] = ev.z;
                if (ev.degenerate) degen = true;
                if (!ev.accepted) ok = false;
            }
        }
        const bool accepted = ok && !degen;
        out.proposals++;
        if (degen) out.degenerate++;
        if (accepted) out.accepted++;
        if (keep_rejected || accepted) out.draws.push_back({theta, z, accepted});
    }
    return out;
}

SampleSet standard_abc_rejection(
    const ModelHooks& model,
    const std::vector<std::function<double(const std::vector<SummaryData>&)>>& distances,
    const std::vector<Interval>& tolerances, std::uint64_t N, RngStream& rng,
    bool keep_rejected) {
    if (distances.size() != tolerances.size())
        throw std::invalid_argument("standard_abc: one tolerance per distance");
    for (const auto& tol : tolerances)
        if (!(tol.lo <= 0.0 && 0.0 <= tol.hi))
            throw std::invalid_argument("standard_abc: tolerances must contain 0");
    SampleSet out;
    if (keep_rejected) out.draws.reserve(N);
    std::vector<double> z(distances.size());
    for (std::uint64_t i = 0; i < N; ++i) {
        const std::vector<double> theta = model.prior_sample(rng);
        bool ok = true, degen = false;
        try {
            const auto sims = model.simulate_summaries(theta, rng);
            for (std::size_t k = 0; k < distances.size(); ++k) {
                z[k] = distances[k](sims);
                if (!(z[k] >= tolerances[k].lo && z[k] <= tolerances[k].hi)) ok = false;
            }
        } catch (const std::exception&) {
            degen = true;
        }
        const bool accepted = ok && !degen;
        out.proposals++;
        if (degen) out.degenerate++;
        if (accepted) out.accepted++;
        if (keep_rejected || accepted) out.draws.push_back({theta, z, accepted});
    }
    return out;
}

namespace {

// annealed copy of the calibrated tests: tolerances widened by factor f
// around the point of equality, critical regions re-solved
std::vector<CalibratedTest> annealed_tests(const std::vector<CalibratedTest>& tests,
                                           double f) {
    std::vector<CalibratedTest> out;
    out.reserve(tests.size());
    for (const auto& t : tests) {
        TestConfig cfg = t.config;
        const double star = cfg.rho_star();
        cfg.tolerance.tau_plus = star + (cfg.tolerance.tau_plus - star) * f;
        double lo = star - (star - cfg.tolerance.tau_minus) * f;
        if (cfg.kind == TestKind::ChiSqDispersion) lo = std::max(lo, 1e-6);
        cfg.tolerance.tau_minus = lo;
        out.push_back(make_calibrated_test(cfg));
    }
    return out;
}

bool indicator(const std::vector<CalibratedTest>& tests,
               const std::vector<SummaryData>& sims, std::vector<double>& z) {
    bool ok = true;
    for (std::size_t k = 0; k < tests.size(); ++k) {
        const auto ev = tests[k].evaluate(sims[k]);
        z[k] = ev.z;
        if (ev.degenerate || !ev.accepted) ok = false;
    }
    return ok;
}

// bounded prior search for an indicator-satisfying state
bool find_start(const ModelHooks& model, const std::vector<CalibratedTest>& tests,
                RngStream& rng, std::vector<double>& theta, std::vector<double>& z,
                std::uint64_t budget = 1000000) {
    for (std::uint64_t i = 0; i < budget; ++i) {
        theta = model.prior_sample(rng);
        try {
            const auto sims = model.simulate_summaries(theta, rng);
            if (indicator(tests, sims, z)) return true;
        } catch (const std::exception&) {
        }
    }
    return false;
}

} // namespace

Chain abc_star_mcmc(const ModelHooks& model, const std::vector<CalibratedTest>& tests,
                    const ProposalSpec& proposal, std::uint64_t iterations, int burn_in,
                    const AnnealingSettings& annealing, RngStream& rng) {
    if (tests.empty()) throw std::invalid_argument("abc_star_mcmc: no tests");
    Chain chain;
    chain.burn_in = burn_in;
    chain.states.reserve(iterations);

    const int stages = annealing.enabled ? std::max(1, annealing.stages) : 1;
    // annealing runs over the first 80% of burn-in, the rest holds f = 1
    const int anneal_span = annealing.enabled ? (burn_in * 4) / 5 : 0;
    auto stage_factor = [&](std::uint64_t it) {
        if (!annealing.enabled || static_cast<int>(it) >= anneal_span || burn_in == 0)
            return 1.0;
        const int j = static_cast<int>(it * stages / std::max(1, anneal_span));
        return 1.0 + (annealing.start_inflation - 1.0) * std::pow(annealing.decay, j);
    };
    chain.annealing_schedule =
        annealing.enabled
            ? "geometric: f_j = 1 + (" + std::to_string(annealing.start_inflation) +
                  " - 1) * " + std::to_string(annealing.decay) + "^j, " +
                  std::to_string(stages) + " stages over 80% of burn-in"
            : "none";

    double f_now = stage_factor(0);
    std::vector<CalibratedTest> current = annealed_tests(tests, f_now);
    CholeskyProposal prop(proposal, f_now);

    std::vector<double> theta(model.dim), z(tests.size());
    if (!find_start(model, current, rng, theta, z))
        throw std::runtime_error("abc_star_mcmc: no indicator-satisfying start found");
    double log_prior = std::log(model.prior_density(theta));
    double log_mass = std::log(prop.box_mass(theta));

    std::vector<double> theta_new(model.dim), z_new(tests.size());
    for (std::uint64_t it = 0; it < iterations; ++it) {
        const double f = stage_factor(it);
        if (f != f_now) {
            f_now = f;
            current = annealed_tests(tests, f_now);
            prop = CholeskyProposal(proposal, f_now);
            log_mass = std::log(prop.box_mass(theta));
            if (f_now == 1.0) {
                // state must satisfy the final indicator once annealing ends
                std::vector<SummaryData> sims = model.simulate_summaries(theta, rng);
                if (!indicator(current, sims, z)) {
                    if (!find_start(model, current, rng, theta, z))
                        throw std::runtime_error("abc_star_mcmc: lost the region after "
                                                 "annealing");
                    log_prior = std::log(model.prior_density(theta));
                    log_mass = std::log(prop.box_mass(theta));
                }
            }
        }

        bool moved = false;
        if (prop.draw(theta, rng, theta_new)) {
            const double prior_new = model.prior_density(theta_new);
            if (prior_new > 0.0) {
                bool ok = false;
                try {
                    const auto sims = model.simulate_summaries(theta_new, rng);
                    ok = indicator(current, sims, z_new);
                } catch (const std::exception&) {
                    ok = false;
                }
                if (ok) {
                    const double log_mass_new = std::log(prop.box_mass(theta_new));
                    const double log_ratio =
                        std::log(prior_new) - log_prior + log_mass - log_mass_new;
                    if (log_ratio >= 0.0 || std::log(rng.uniform01()) < log_ratio) {
                        theta = theta_new;
                        z = z_new;
                        log_prior = std::log(prior_new);
                        log_mass = log_mass_new;
                        moved = true;
                    }
                }
            }
        }
        chain.iterations++;
        if (moved) chain.accepted_moves++;
        chain.states.push_back({theta, z, moved});
    }
    return chain;
}

Chain metropolis_hastings(const std::function<double(const std::vector<double>&)>& log_target,
                          const ProposalSpec& proposal, std::vector<double> init,
                          std::uint64_t iterations, int burn_in, RngStream& rng) {
    Chain chain;
    chain.burn_in = burn_in;
    chain.states.reserve(iterations);
    CholeskyProposal prop(proposal);
    std::vector<double> theta = std::move(init);
    double lt = log_target(theta);
    if (!std::isfinite(lt)) throw std::invalid_argument("metropolis_hastings: bad init");
    double log_mass = std::log(prop.box_mass(theta));
    std::vector<double> cand(prop.dim);
    for (std::uint64_t it = 0; it < iterations; ++it) {
        bool moved = false;
        if (prop.draw(theta, rng, cand)) {
            const double lt_new = log_target(cand);
            if (std::isfinite(lt_new)) {
                const double log_mass_new = std::log(prop.box_mass(cand));
                const double log_ratio = lt_new - lt + log_mass - log_mass_new;
                if (log_ratio >= 0.0 || std::log(rng.uniform01()) < log_ratio) {
                    theta = cand;
                    lt = lt_new;
                    log_mass = log_mass_new;
                    moved = true;
                }
            }
        }
        chain.iterations++;
        if (moved) chain.accepted_moves++;
        chain.states.push_back({theta, {}, moved});
    }
    return chain;
}

Chain ma1_exact_posterior_mcmc(const MA1Model& model, std::uint64_t iters_per_chain,
                               int n_chains, std::uint64_t seed, int burn_in,
                               bool flat_prior) {
    const ProposalSpec proposal = ProposalSpec::bivariate(
        5e-2, 5e-2, 5e-4, Interval(-0.5, 0.5),
        Interval(0.0, std::numeric_limits<double>::infinity()));
    auto log_target = [&](const std::vector<double>& th) -> double {
        if (std::fabs(th[0]) > 0.5 || th[1] <= 0.0)
            return -std::numeric_limits<double>::infinity();
        double lp = 0.0;
        if (!flat_prior) {
            const double pr = model.induced_prior_density(th[0], th[1]);
            if (pr <= 0.0) return -std::numeric_limits<double>::infinity();
            lp = std::log(pr);
        }
        return model.conditional_loglik(th[0], th[1]) + lp;
    };

    // all chains start near the observed anchor L^{-1}(rho*), jittered
    const auto [a0, s20] = model.link_inverse(1.0, 0.0);
    std::vector<Chain> chains(n_chains);
    auto run_one = [&](int c) {
        RngStream rng(seed, static_cast<std::uint64_t>(c) + 1);
        std::vector<double> init{a0, s20};
        for (int tries = 0; tries < 100; ++tries) {
            std::vector<double> jit{a0 + 0.02 * rng.normal(), s20 * (1.0 + 0.02 * rng.normal())};
            if (std::isfinite(log_target(jit))) {
                init = jit;
                break;
            }
        }
        chains[c] = metropolis_hastings(log_target, proposal, init, iters_per_chain,
                                        burn_in, rng);
    };
    std::vector<std::thread> workers;
    for (int c = 0; c < n_chains; ++c) workers.emplace_back(run_one, c);
    for (auto& w : workers) w.join();

    // deterministic merge in stream order
    Chain merged;
    merged.burn_in = 0;
    merged.annealing_schedule = "none";
    for (const auto& ch : chains) {
        merged.iterations += ch.iterations;
        merged.accepted_moves += ch.accepted_moves;
        for (std::size_t i = ch.burn_in; i < ch.states.size(); ++i)
            merged.states.push_back(ch.states[i]);
    }
    return merged;
}

} // namespace abcstar
