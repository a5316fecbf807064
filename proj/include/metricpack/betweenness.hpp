#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "space.hpp"

namespace metricpack {

// A value in [1, +inf]. The infinite marker means "no exponent constraint",
// which for a whole space is equivalent to ultrametricity.
class ExtendedPositive {
public:
    static ExtendedPositive infinite() {
        return ExtendedPositive(std::numeric_limits<double>::infinity());
    }

    static ExtendedPositive finite(double v) {
        if (!(v >= 1.0) || !std::isfinite(v))
            throw std::invalid_argument("ExtendedPositive: finite values must be >= 1");
        return ExtendedPositive(v);
    }

    bool is_infinite() const { return std::isinf(v_); }
    double value() const { return v_; }

    // 2^(1/t), with the convention 2^(1/inf) = 1.
    double pow2_inv() const { return is_infinite() ? 1.0 : std::pow(2.0, 1.0 / v_); }

    bool operator==(const ExtendedPositive&) const = default;

private:
    explicit ExtendedPositive(double v) : v_(v) {}
    double v_;
};

struct TripleExponentResult {
    ExtendedPositive exponent;
    double residual = 0.0;  // |(a/c)^s + (b/c)^s - 1| at the returned s; 0 when infinite or analytic
};

namespace detail {

// Unique root of (a/c)^s + (b/c)^s = 1, assuming max{a,b} < c and a + b > c.
// The left side is strictly decreasing in s, positive at s = 1, and at
// s = ln2 / ln(c/max{a,b}) the dominant term alone equals 1/2, so the root is
// bracketed by [1, that value]. Plain bisection down to root_tol.
inline double solve_triple_exponent(double a, double b, double c, double root_tol) {
    const double ra = a / c;
    const double rb = b / c;
    auto g = [&](double s) { return std::pow(ra, s) + std::pow(rb, s) - 1.0; };
    double lo = 1.0;
    double hi = std::log(2.0) / std::log(c / std::max(a, b));
    if (hi <= lo) return lo;
    while (hi - lo > root_tol) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

// Exponent of a single triple with base c = d(x,y) and legs a = d(x,z),
// b = d(z,y). Infinite when the base does not strictly dominate both legs;
// 1 when the triple is degenerate (a + b = c); otherwise the root of
// (a/c)^s + (b/c)^s = 1.
inline TripleExponentResult triple_exponent(double a, double b, double c,
                                            const ToleranceConfig& tol = {}) {
    if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
        throw std::domain_error("triple_exponent: sides must be positive");
    if (a + b < c) throw std::domain_error("triple_exponent: sides violate the triangle inequality");
    if (std::max(a, b) >= c) return {ExtendedPositive::infinite(), 0.0};
    if (a + b == c) return {ExtendedPositive::finite(1.0), 0.0};
    const double s = detail::solve_triple_exponent(a, b, c, tol.root_tol);
    const double residual = std::abs(std::pow(a / c, s) + std::pow(b / c, s) - 1.0);
    return {ExtendedPositive::finite(std::max(1.0, s)), residual};
}

struct BetweennessScan {
    ExtendedPositive exponent = ExtendedPositive::infinite();
    std::array<std::size_t, 3> min_triple{0, 0, 0};  // (x, y, z) attaining the minimum
    bool has_finite = false;
};

// Minimum triple exponent over all triples of distinct points, together with
// the attaining triple. Infinite exactly when no triple has a strictly
// dominating base, i.e. when the space is ultrametric.
inline BetweennessScan betweenness_scan(const FiniteMetricSpace& space,
                                        const ToleranceConfig& tol = {}) {
    BetweennessScan scan;
    const std::size_t n = space.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
            const double c = space.dist(x, y);
            for (std::size_t z = 0; z < n; ++z) {
                if (z == x || z == y) continue;
                const double a = space.dist(x, z);
                const double b = space.dist(z, y);
                if (std::max(a, b) >= c) continue;
                // a + b >= c holds up to validation slack; clamp to the
                // degenerate exponent 1 in that case
                const double s = (a + b <= c) ? 1.0 : detail::solve_triple_exponent(a, b, c, tol.root_tol);
                if (s < best) {
                    best = s;
                    scan.min_triple = {x, y, z};
                    scan.has_finite = true;
                    if (best <= 1.0) {
                        scan.exponent = ExtendedPositive::finite(1.0);
                        return scan;
                    }
                }
            }
        }
    }
    if (scan.has_finite) scan.exponent = ExtendedPositive::finite(std::max(1.0, best));
    return scan;
}

inline ExtendedPositive betweenness_exponent(const FiniteMetricSpace& space,
                                             const ToleranceConfig& tol = {}) {
    return betweenness_scan(space, tol).exponent;
}

class SnowflakeRangeError : public std::domain_error {
public:
    SnowflakeRangeError(double requested, double limit, std::array<std::size_t, 3> triple)
        : std::domain_error("snowflake: exponent " + std::to_string(requested) +
                            " exceeds the betweenness exponent " + std::to_string(limit) +
                            " attained at triple (" + std::to_string(triple[0]) + "," +
                            std::to_string(triple[1]) + "," + std::to_string(triple[2]) + ")"),
          requested_(requested), limit_(limit), triple_(triple) {}

    double requested() const { return requested_; }
    double limit() const { return limit_; }
    const std::array<std::size_t, 3>& triple() const { return triple_; }

private:
    double requested_;
    double limit_;
    std::array<std::size_t, 3> triple_;
};

// Raises every distance to the power t. Valid for 0 < t up to the betweenness
// exponent of the space (any finite t when that exponent is infinite); for a
// finite space the bound is attained, so t equal to it is accepted.
inline FiniteMetricSpace snowflake(const FiniteMetricSpace& space, double t,
                                   const ToleranceConfig& tol = {}) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("snowflake: exponent must be positive");
    const auto scan = betweenness_scan(space, tol);
    if (!scan.exponent.is_infinite() && t > scan.exponent.value() * (1.0 + tol.rel_tol))
        throw SnowflakeRangeError(t, scan.exponent.value(), scan.min_triple);
    Matrix m(space.size(), std::vector<double>(space.size(), 0.0));
    for (std::size_t i = 0; i < space.size(); ++i)
        for (std::size_t j = 0; j < space.size(); ++j)
            if (i != j) m[i][j] = std::pow(space.dist(i, j), t);
    return FiniteMetricSpace(space.labels(), m, tol);
}

// Every closed ball of radius r has diameter at most 2^(1/t0) * r, where t0
// is the betweenness exponent. Checked at every breakpoint radius for every
// center, with rel_tol * r slack; violations are reported as (center, r, diam).
inline CheckReport ball_diameter_check(const FiniteMetricSpace& space,
                                       const ToleranceConfig& tol = {}) {
    const double factor = betweenness_exponent(space, tol).pow2_inv();
    CheckReport report;
    report.verdict = true;
    const auto radii = distance_breakpoints(space, space.all(), tol);
    for (std::size_t center = 0; center < space.size(); ++center) {
        for (double r : radii) {
            const double dia = diameter(space, closed_ball(space, center, r));
            if (dia > factor * r + tol.rel_tol * r) {
                report.verdict = false;
                report.witnesses.push_back({"ball-diameter-violation", {center}, {r, dia, factor}});
            }
        }
    }
    return report;
}

}  // namespace metricpack
