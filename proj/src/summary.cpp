#include "abcstar/summary.hpp"

#include <cmath>
#include <stdexcept>

namespace abcstar {

double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean: empty");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double centered_ss(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) {
        const double d = x - m;
        s += d * d;
    }
    return s;
}

double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("sample_variance: need >= 2 values");
    return centered_ss(v) / static_cast<double>(v.size() - 1);
}

double sample_sd(const std::vector<double>& v) { return std::sqrt(sample_variance(v)); }

double mle_variance(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mle_variance: empty");
    return centered_ss(v) / static_cast<double>(v.size());
}

double pearson_r(const PairSet& p) {
    if (p.first.size() != p.second.size())
        throw std::invalid_argument("pearson_r: size mismatch");
    if (p.count() < 2) throw std::invalid_argument("pearson_r: need >= 2 pairs");
    const double ma = mean(p.first), mb = mean(p.second);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (int i = 0; i < p.count(); ++i) {
        const double da = p.first[i] - ma, db = p.second[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    const double denom = std::sqrt(saa * sbb);
    if (denom == 0.0) throw std::invalid_argument("pearson_r: degenerate pairs");
    return sab / denom;
}

double fisher_z(double r) {
    const double cap = 1.0 - 1e-12;
    if (r > cap) r = cap;
    if (r < -cap) r = -cap;
    return std::atanh(r);
}

double lag_autocorrelation(const std::vector<double>& x, int lag) {
    const int n = static_cast<int>(x.size());
    if (lag < 1 || n - lag < 2)
        throw std::invalid_argument("lag_autocorrelation: series too short");
    PairSet p;
    p.first.assign(x.begin(), x.end() - lag);
    p.second.assign(x.begin() + lag, x.end());
    return pearson_r(p);
}

} // namespace abcstar
