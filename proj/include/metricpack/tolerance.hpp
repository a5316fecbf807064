#pragma once

#include <stdexcept>

namespace metricpack {

// Numeric slack knobs shared across the library.
//   rel_tol  - relative slack for metric validation, value bucketing and
//              approximate-equality comparisons
//   root_tol - absolute bracket width at which the exponent bisection stops
struct ToleranceConfig {
    double rel_tol = 1e-9;
    double root_tol = 1e-12;

    void validate() const {
        if (!(rel_tol > 0.0) || !(rel_tol < 1e-3) || !(root_tol > 0.0) || !(root_tol < 1e-3))
            throw std::invalid_argument("ToleranceConfig: tolerances must lie in (0, 1e-3)");
    }
};

namespace detail {

// a <= b up to relative slack on the larger magnitude (both args nonnegative)
inline bool leq_rel(double a, double b, double rel) {
    const double scale = a > b ? a : b;
    return a <= b + rel * scale;
}

// |a - b| within relative slack (both args nonnegative)
inline bool close_rel(double a, double b, double rel) {
    const double diff = a > b ? a - b : b - a;
    const double scale = a > b ? a : b;
    return diff <= rel * scale;
}

}  // namespace detail

}  // namespace metricpack
