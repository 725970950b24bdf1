#include "abcstar/diagnostics.hpp"

#include "abcstar/quadrature.hpp"
#include "abcstar/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace abcstar {

std::vector<double> density_bin_probabilities(const std::function<double(double)>& density,
                                              Interval support, int bins) {
    std::vector<double> p(bins);
    const double w = support.width() / bins;
    for (int b = 0; b < bins; ++b) {
        const double a = support.lo + b * w;
        p[b] = integrate(density, a, a + w, 1e-11);
        if (p[b] < 0.0) p[b] = 0.0;
    }
    return p;
}

std::vector<double> histogram_probabilities(const std::vector<double>& samples,
                                            Interval support, int bins,
                                            bool floor_zero_bins) {
    std::vector<double> q(bins, 0.0);
    const double w = support.width() / bins;
    std::size_t used = 0;
    for (double s : samples) {
        if (s < support.lo || s > support.hi) continue;
        int b = static_cast<int>((s - support.lo) / w);
        if (b == bins) b = bins - 1;
        q[b] += 1.0;
        ++used;
    }
    if (used == 0) throw insufficient_samples_error("histogram: no samples in support");
    const double n = static_cast<double>(used);
    for (double& v : q) {
        v = (v == 0.0 && floor_zero_bins) ? 0.5 / n : v / n;
    }
    return q;
}

double kl_between_bins(const std::vector<double>& q, const std::vector<double>& p) {
    if (q.size() != p.size()) throw std::invalid_argument("kl_between_bins: size mismatch");
    double kl = 0.0;
    for (std::size_t b = 0; b < q.size(); ++b) {
        if (q[b] <= 0.0) continue;
        kl += q[b] * std::log(q[b] / std::max(p[b], 1e-300));
    }
    return kl;
}

double kl_from_samples(const std::vector<double>& samples,
                       const std::function<double(double)>& exact_density,
                       Interval support, int bins) {
    if (samples.size() < 1000)
        throw insufficient_samples_error("kl_from_samples: need >= 1000 samples");
    const auto q = histogram_probabilities(samples, support, bins, false);
    auto p = density_bin_probabilities(exact_density, support, bins);
    // zero-mass exact bins against nonzero sample mass get the same floor
    const double floor = 0.5 / static_cast<double>(samples.size());
    for (double& v : p)
        if (v <= 0.0) v = floor;
    return kl_between_bins(q, p);
}

std::vector<double> histogram_probabilities_2d(const std::vector<std::vector<double>>& samples,
                                               Interval support0, Interval support1,
                                               int bins, bool floor_zero_bins) {
    std::vector<double> q(static_cast<std::size_t>(bins) * bins, 0.0);
    const double w0 = support0.width() / bins, w1 = support1.width() / bins;
    std::size_t used = 0;
    for (const auto& s : samples) {
        if (s[0] < support0.lo || s[0] > support0.hi || s[1] < support1.lo ||
            s[1] > support1.hi)
            continue;
        int b0 = std::min(bins - 1, static_cast<int>((s[0] - support0.lo) / w0));
        int b1 = std::min(bins - 1, static_cast<int>((s[1] - support1.lo) / w1));
        q[static_cast<std::size_t>(b0) * bins + b1] += 1.0;
        ++used;
    }
    if (used == 0) throw insufficient_samples_error("histogram2d: no samples in support");
    const double n = static_cast<double>(used);
    for (double& v : q) v = (v == 0.0 && floor_zero_bins) ? 0.5 / n : v / n;
    return q;
}

double kl_from_samples_2d(const std::vector<std::vector<double>>& samples,
                          const std::vector<double>& reference_probs, Interval support0,
                          Interval support1, int bins) {
    if (samples.size() < 1000)
        throw insufficient_samples_error("kl_from_samples_2d: need >= 1000 samples");
    const auto q = histogram_probabilities_2d(samples, support0, support1, bins, false);
    return kl_between_bins(q, reference_probs);
}

namespace {

double silverman_bandwidth(std::vector<double> v) {
    const std::size_t n = v.size();
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    const double sd = std::sqrt(ss / (n - 1));
    std::sort(v.begin(), v.end());
    const double iqr = v[static_cast<std::size_t>(0.75 * n)] - v[static_cast<std::size_t>(0.25 * n)];
    double spread = std::min(sd, iqr / 1.34);
    if (spread <= 0.0) spread = sd > 0.0 ? sd : 1e-8;
    return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

double kde_1d(const std::vector<double>& v, double h, double x) {
    double s = 0.0;
    for (double xi : v) {
        const double u = (x - xi) / h;
        s += std::exp(-0.5 * u * u);
    }
    return s;
}

} // namespace

MapEstimate map_from_samples_1d(const std::vector<double>& samples, Interval support) {
    if (samples.size() < 1000)
        throw insufficient_samples_error("map_from_samples: need >= 1000 samples");
    const double h = silverman_bandwidth(samples);
    MapEstimate est;
    est.bandwidth = {h};
    if (h <= 0.0 || !std::isfinite(h)) {
        est.location = {samples.front()}; // all mass at one atom
        est.bandwidth = {0.0};
        return est;
    }
    const int grid = 512;
    double best = support.lo, bestv = -1.0;
    for (int i = 0; i < grid; ++i) {
        const double x = support.lo + support.width() * i / (grid - 1);
        const double v = kde_1d(samples, h, x);
        if (v > bestv) {
            bestv = v;
            best = x;
        }
    }
    const double step = support.width() / (grid - 1);
    const double lo = std::max(support.lo, best - step);
    const double hi = std::min(support.hi, best + step);
    est.location = {golden_max([&](double x) { return kde_1d(samples, h, x); }, lo, hi,
                               1e-6 * support.width())};
    return est;
}

MapEstimate map_from_samples(const std::vector<std::vector<double>>& samples,
                             const std::vector<Interval>& support) {
    if (samples.size() < 1000)
        throw insufficient_samples_error("map_from_samples: need >= 1000 samples");
    const std::size_t dim = support.size();
    if (dim == 1) {
        std::vector<double> flat(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) flat[i] = samples[i][0];
        return map_from_samples_1d(flat, support[0]);
    }
    if (dim != 2) throw std::invalid_argument("map_from_samples: dim must be 1 or 2");
    std::vector<double> c0(samples.size()), c1(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        c0[i] = samples[i][0];
        c1[i] = samples[i][1];
    }
    const double h0 = silverman_bandwidth(c0), h1 = silverman_bandwidth(c1);
    auto kde = [&](double x, double y) {
        double s = 0.0;
        for (std::size_t i = 0; i < c0.size(); ++i) {
            const double u = (x - c0[i]) / h0, v = (y - c1[i]) / h1;
            s += std::exp(-0.5 * (u * u + v * v));
        }
        return s;
    };
    // coarse grid argmax, then two rounds of per-axis refinement
    const int grid = 60;
    double bx = support[0].lo, by = support[1].lo, bestv = -1.0;
    for (int i = 0; i < grid; ++i) {
        const double x = support[0].lo + support[0].width() * i / (grid - 1);
        for (int j = 0; j < grid; ++j) {
            const double y = support[1].lo + support[1].width() * j / (grid - 1);
            const double v = kde(x, y);
            if (v > bestv) {
                bestv = v;
                bx = x;
                by = y;
            }
        }
    }
    const double sx = support[0].width() / (grid - 1), sy = support[1].width() / (grid - 1);
    for (int round = 0; round < 2; ++round) {
        bx = golden_max([&](double x) { return kde(x, by); },
                        std::max(support[0].lo, bx - 1.5 * sx),
                        std::min(support[0].hi, bx + 1.5 * sx), 1e-5 * sx);
        by = golden_max([&](double y) { return kde(bx, y); },
                        std::max(support[1].lo, by - 1.5 * sy),
                        std::min(support[1].hi, by + 1.5 * sy), 1e-5 * sy);
    }
    MapEstimate est;
    est.location = {bx, by};
    est.bandwidth = {h0, h1};
    return est;
}

double tp_lower_bound(double alpha, double acceptance_prob) {
    if (!(acceptance_prob > 0.0 && acceptance_prob <= 1.0))
        throw std::domain_error("tp_lower_bound: acceptance_prob outside (0, 1]");
    return std::max(0.0, 1.0 - alpha / acceptance_prob);
}

double empirical_size(const CalibratedTest& test, double rho, int reps, RngStream& rng) {
    if (reps < 1) throw std::invalid_argument("empirical_size: reps < 1");
    int hits = 0;
    for (int i = 0; i < reps; ++i) {
        const SummaryData d = simulate_summary_data(test.config, rho, rng);
        if (test.evaluate(d).accepted) ++hits;
    }
    return static_cast<double>(hits) / reps;
}

std::vector<double> sample_from_density(const std::function<double(double)>& density,
                                        Interval support, int n, RngStream& rng) {
    const int grid = 20000;
    std::vector<double> x(grid), cdf(grid);
    double acc = 0.0;
    for (int i = 0; i < grid; ++i) {
        x[i] = support.lo + support.width() * i / (grid - 1);
        acc += std::max(0.0, density(x[i]));
        cdf[i] = acc;
    }
    for (double& c : cdf) c /= acc;
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        const std::size_t j = std::min<std::size_t>(it - cdf.begin(), grid - 1);
        out[i] = x[j];
    }
    return out;
}

} // namespace abcstar
