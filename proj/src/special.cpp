#include "abcstar/special.hpp"

#include "abcstar/quadrature.hpp"
#include "abcstar/roots.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace abcstar {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

// series expansion of P(a,x), valid for x < a + 1
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// continued fraction for Q(a,x) = 1 - P(a,x), valid for x >= a + 1
// (modified Lentz)
double gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_p: a <= 0 or x < 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double beta_inc(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta_inc: a,b must be > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
    // continued fraction converges fast for x < (a+1)/(a+b+2)
    if (x >= (a + 1.0) / (a + b + 2.0)) return 1.0 - beta_inc(b, a, 1.0 - x);
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 400; ++m) {
        const double dm = static_cast<double>(m);
        double num = dm * (b - dm) * x / ((a + 2.0 * dm - 1.0) * (a + 2.0 * dm));
        d = 1.0 + num * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        num = -(a + dm) * (a + b + dm) * x / ((a + 2.0 * dm) * (a + 2.0 * dm + 1.0));
        d = 1.0 + num * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return front * h / a;
}

double chi2_cdf(double x, int df) {
    if (df < 1) throw std::domain_error("chi2_cdf: df < 1");
    if (x < 0.0) throw std::domain_error("chi2_cdf: x < 0");
    return gamma_p(0.5 * df, 0.5 * x);
}

double chi2_logpdf(double x, int df) {
    if (df < 1) throw std::domain_error("chi2_logpdf: df < 1");
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    const double k = 0.5 * df;
    return (k - 1.0) * std::log(x) - 0.5 * x - k * 0.6931471805599453094 - std::lgamma(k);
}

double chi2_quantile(double p, int df) {
    if (df < 1) throw std::domain_error("chi2_quantile: df < 1");
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("chi2_quantile: p outside (0,1)");
    // Wilson-Hilferty start, then Newton on the CDF
    const double d = static_cast<double>(df);
    const double q = normal_quantile(p);
    const double t = 1.0 - 2.0 / (9.0 * d) + q * std::sqrt(2.0 / (9.0 * d));
    double x = d * t * t * t;
    if (!(x > 0.0)) x = 0.5 * d;
    for (int it = 0; it < 60; ++it) {
        const double f = chi2_cdf(x, df) - p;
        const double pdf = std::exp(chi2_logpdf(x, df));
        if (pdf <= 0.0) break;
        double step = f / pdf;
        if (std::fabs(step) > 0.5 * x) step = (step > 0 ? 0.5 : -0.5) * x;
        x -= step;
        if (std::fabs(step) < 1e-13 * (1.0 + x)) return x;
    }
    // safeguarded fallback on a bracket around the Newton estimate
    double lo = x, hi = x;
    while (chi2_cdf(lo, df) > p && lo > 1e-300) lo *= 0.5;
    while (chi2_cdf(hi, df) < p) hi = hi * 2.0 + 1.0;
    return find_root([&](double v) { return chi2_cdf(v, df) - p; }, Interval(lo, hi), 1e-13);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

double normal_pdf(double x) { return 0.3989422804014326779 * std::exp(-0.5 * x * x); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p outside (0,1)");
    // Acklam's rational approximation, one Halley polish
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e / normal_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double student_t_cdf(double x, int df) {
    if (df < 1) throw std::domain_error("student_t_cdf: df < 1");
    const double d = static_cast<double>(df);
    const double ib = beta_inc(0.5 * d, 0.5, d / (d + x * x));
    return x >= 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

double student_t_cdf(double x, int df, double ncp) {
    if (df < 1) throw std::domain_error("student_t_cdf: df < 1");
    if (ncp == 0.0) return student_t_cdf(x, df);
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    // F(x) = E_S[ Phi(x*S - ncp) ], S = sqrt(W/df), W ~ chi2_df
    const double d = static_cast<double>(df);
    const double lognorm =
        std::log(2.0) + 0.5 * d * std::log(0.5 * d) - std::lgamma(0.5 * d);
    auto integrand = [&](double s) {
        const double logg = lognorm + (d - 1.0) * std::log(s) - 0.5 * d * s * s;
        return normal_cdf(x * s - ncp) * std::exp(logg);
    };
    const double sd = 1.0 / std::sqrt(2.0 * d);
    const double lo = std::max(1e-12, 1.0 - 12.0 * sd);
    const double hi = 1.0 + std::max(12.0 * sd, 8.0 / std::sqrt(d));
    double v = integrate(integrand, lo, hi, 1e-12);
    if (lo > 1e-10) v += integrate(integrand, 1e-12, lo, 1e-13);
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    return v;
}

double student_t_quantile(double p, int df) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("student_t_quantile: p outside (0,1)");
    const double z = normal_quantile(p);
    double x = z;
    if (df <= 6) x = z * (1.0 + (z * z + 1.0) / (4.0 * df)); // Cornish-Fisher-ish start
    double lo = x - 2.0 - std::fabs(x), hi = x + 2.0 + std::fabs(x);
    while (student_t_cdf(lo, df) > p) lo = 2.0 * lo - hi;
    while (student_t_cdf(hi, df) < p) hi = 2.0 * hi - lo;
    return find_root([&](double v) { return student_t_cdf(v, df) - p; }, Interval(lo, hi),
                     1e-13);
}

double bvn_cdf(double h, double k, double r) {
    if (std::isinf(h) || std::isinf(k)) {
        if (h < 0 || k < 0) return 0.0;
        if (std::isinf(h) && std::isinf(k)) return 1.0;
        return std::isinf(h) ? normal_cdf(k) : normal_cdf(h);
    }
    if (r == 0.0) return normal_cdf(h) * normal_cdf(k);
    // Phi2(h,k,r) = Phi(h)Phi(k) + 1/(2pi) * int_0^r exp(...) dt, 16-point
    // Gauss-Legendre on [0, r] is ample for |r| below ~0.95
    static const double gx[] = {0.0950125098376374, 0.2816035507792589,
                                0.4580167776572274, 0.6178762444026438,
                                0.7554044083550030, 0.8656312023878318,
                                0.9445750230732326, 0.9894009349916499};
    static const double gw[] = {0.1894506104550685, 0.1826034150449236,
                                0.1691565193950025, 0.1495959888165767,
                                0.1246289712555339, 0.0951585116824928,
                                0.0622535239386479, 0.0271524594117541};
    double sum = 0.0;
    for (int i = 0; i < 8; ++i) {
        for (double sgn : {-1.0, 1.0}) {
            const double t = 0.5 * r * (1.0 + sgn * gx[i]);
            const double om = 1.0 - t * t;
            sum += gw[i] *
                   std::exp(-(h * h - 2.0 * t * h * k + k * k) / (2.0 * om)) /
                   std::sqrt(om);
        }
    }
    sum *= 0.5 * r / (2.0 * 3.14159265358979323846);
    return normal_cdf(h) * normal_cdf(k) + sum;
}

double bvn_rect_prob(double lo1, double hi1, double lo2, double hi2, double r) {
    const double v = bvn_cdf(hi1, hi2, r) - bvn_cdf(lo1, hi2, r) - bvn_cdf(hi1, lo2, r) +
                     bvn_cdf(lo1, lo2, r);
    return std::min(1.0, std::max(0.0, v));
}

} // namespace abcstar
