#pragma once

#include "abcstar/interval.hpp"

#include <functional>
#include <stdexcept>

namespace abcstar {

/// Thrown when a root bracket has no sign change.
struct no_bracket_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Root of f on the bracket. Bisection with secant steps taken when they
/// stay safely inside the current bracket; f(lo) and f(hi) must have
/// opposite signs (a zero endpoint counts).
double find_root(const std::function<double(double)>& f, Interval bracket,
                 double tol = 1e-9);

/// Maximizer of a unimodal f on [lo, hi] by golden-section search.
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol);

} // namespace abcstar
