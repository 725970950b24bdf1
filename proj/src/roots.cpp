#include "abcstar/roots.hpp"

#include <cmath>

namespace abcstar {

double find_root(const std::function<double(double)>& f, Interval bracket, double tol) {
    double a = bracket.lo, b = bracket.hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw no_bracket_error("find_root: no sign change on bracket");
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        double x;
        // secant proposal, fall back to bisection when it leaves the bracket
        const double denom = fb - fa;
        if (denom != 0.0) {
            x = a - fa * (b - a) / denom;
            const double margin = 0.01 * (b - a);
            if (!(x > a + margin && x < b - margin)) x = 0.5 * (a + b);
        } else {
            x = 0.5 * (a + b);
        }
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (fa * fx < 0.0) {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
    }
    return 0.5 * (a + b);
}

double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
    const double g = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace abcstar
