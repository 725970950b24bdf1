#include "abcstar/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace abcstar {

namespace {

double simpson(double fa, double fm, double fb, double h6) {
    return h6 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b, double fa,
             double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(fa, flm, fm, (m - a) / 6.0);
    const double right = simpson(fm, frm, fb, (b - m) / 6.0);
    const double err = left + right - whole;
    if (std::fabs(err) <= 15.0 * tol || (b - a) < 1e-14 * (std::fabs(a) + std::fabs(b)))
        return left + right + err / 15.0;
    if (depth <= 0) throw quadrature_error("integrate: subdivision depth exhausted");
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int max_depth) {
    if (!(a < b)) throw std::invalid_argument("integrate: requires a < b");
    if (!(tol > 0.0)) throw std::invalid_argument("integrate: tol must be positive");
    // seed with a few panels so narrow features inside wide domains are seen
    const int panels = 8;
    const double h = (b - a) / panels;
    double total = 0.0;
    double x0 = a, f0 = f(a);
    for (int i = 0; i < panels; ++i) {
        const double x1 = (i == panels - 1) ? b : a + h * (i + 1);
        const double xm = 0.5 * (x0 + x1);
        const double fmid = f(xm), f1 = f(x1);
        const double whole = simpson(f0, fmid, f1, (x1 - x0) / 6.0);
        total += adapt(f, x0, x1, f0, fmid, f1, whole, tol / panels, max_depth);
        x0 = x1;
        f0 = f1;
    }
    return total;
}

} // namespace abcstar
