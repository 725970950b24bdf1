#pragma once

#include <stdexcept>

namespace abcstar {

/// Closed interval [lo, hi]. Carries tolerance regions, critical regions
/// and parameter supports.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo <= hi)) throw std::invalid_argument("Interval: lo > hi");
    }

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

} // namespace abcstar
