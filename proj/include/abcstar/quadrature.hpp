#pragma once

#include <functional>
#include <stdexcept>

namespace abcstar {

struct quadrature_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive Simpson estimate of the integral of f over [a, b] with
/// absolute error target tol. Exact on cubics per panel. Throws
/// quadrature_error when the subdivision depth bound is exhausted before
/// the tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth = 60);

} // namespace abcstar
