#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "space.hpp"

namespace metricpack {

// Two factor spaces plus a metric on the index product. The bijection between
// product indices and factor pairs is fixed row-major in the first factor:
// k = i * ny + j.
class ProductSpace {
public:
    ProductSpace(FiniteMetricSpace x, FiniteMetricSpace y, FiniteMetricSpace product)
        : x_(std::move(x)), y_(std::move(y)), product_(std::move(product)) {
        if (product_.size() != x_.size() * y_.size())
            throw std::invalid_argument("ProductSpace: product size must be nx * ny");
    }

    const FiniteMetricSpace& factor_x() const { return x_; }
    const FiniteMetricSpace& factor_y() const { return y_; }
    const FiniteMetricSpace& product() const { return product_; }

    std::size_t nx() const { return x_.size(); }
    std::size_t ny() const { return y_.size(); }
    std::size_t size() const { return product_.size(); }

    std::size_t index(std::size_t i, std::size_t j) const { return i * y_.size() + j; }
    std::pair<std::size_t, std::size_t> split(std::size_t k) const {
        return {k / y_.size(), k % y_.size()};
    }

    double d(std::size_t k1, std::size_t k2) const { return product_.dist(k1, k2); }

    // partial distances of a product pair
    double dx(std::size_t k1, std::size_t k2) const {
        return x_.dist(k1 / y_.size(), k2 / y_.size());
    }
    double dy(std::size_t k1, std::size_t k2) const {
        return y_.dist(k1 % y_.size(), k2 % y_.size());
    }

    double d_inf(std::size_t k1, std::size_t k2) const { return std::max(dx(k1, k2), dy(k1, k2)); }
    double d_one(std::size_t k1, std::size_t k2) const { return dx(k1, k2) + dy(k1, k2); }

private:
    FiniteMetricSpace x_, y_, product_;
};

namespace detail {

inline std::vector<std::string> product_labels(const FiniteMetricSpace& x,
                                               const FiniteMetricSpace& y) {
    std::vector<std::string> labels;
    labels.reserve(x.size() * y.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j)
            labels.push_back("(" + x.label(i) + "," + y.label(j) + ")");
    return labels;
}

inline double combine_p(double dx, double dy, double p) {
    if (dx == 0.0) return dy;
    if (dy == 0.0) return dx;
    if (std::isinf(p)) return std::max(dx, dy);
    if (p == 1.0) return dx + dy;
    if (p == 2.0) return std::hypot(dx, dy);
    return std::pow(std::pow(dx, p) + std::pow(dy, p), 1.0 / p);
}

}  // namespace detail

// The p-norm combination metric: (dx^p + dy^p)^(1/p), max{dx, dy} at p = inf.
inline ProductSpace product_p(const FiniteMetricSpace& x, const FiniteMetricSpace& y, double p,
                              const ToleranceConfig& tol = {}) {
    if (std::isnan(p) || p < 1.0) throw std::domain_error("product_p: p must lie in [1, inf]");
    const std::size_t n = x.size() * y.size();
    Matrix m(n, std::vector<double>(n, 0.0));
    for (std::size_t i1 = 0; i1 < x.size(); ++i1)
        for (std::size_t j1 = 0; j1 < y.size(); ++j1)
            for (std::size_t i2 = 0; i2 < x.size(); ++i2)
                for (std::size_t j2 = 0; j2 < y.size(); ++j2) {
                    const std::size_t k1 = i1 * y.size() + j1;
                    const std::size_t k2 = i2 * y.size() + j2;
                    if (k1 < k2) {
                        const double v = detail::combine_p(x.dist(i1, i2), y.dist(j1, j2), p);
                        m[k1][k2] = v;
                        m[k2][k1] = v;
                    }
                }
    return ProductSpace(x, y, FiniteMetricSpace(detail::product_labels(x, y), m, tol));
}

// Wraps an explicit matrix over the index product; the matrix must itself be
// a valid metric, and no structural relation to the factors is assumed.
inline ProductSpace product_custom(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                                   const Matrix& matrix, const ToleranceConfig& tol = {}) {
    if (matrix.size() != x.size() * y.size())
        throw std::invalid_argument("product_custom: matrix size must be nx * ny");
    return ProductSpace(x, y, FiniteMetricSpace(detail::product_labels(x, y), matrix, tol));
}

// d restricts to d_X on y-slices and to d_Y on x-slices, within rel_tol.
inline CheckReport is_partial_distance_preserving(const ProductSpace& P,
                                                  const ToleranceConfig& tol = {}) {
    CheckReport report;
    report.verdict = true;
    for (std::size_t j = 0; j < P.ny(); ++j)
        for (std::size_t i1 = 0; i1 < P.nx(); ++i1)
            for (std::size_t i2 = i1 + 1; i2 < P.nx(); ++i2) {
                const std::size_t k1 = P.index(i1, j), k2 = P.index(i2, j);
                if (!detail::close_rel(P.d(k1, k2), P.factor_x().dist(i1, i2), tol.rel_tol)) {
                    report.verdict = false;
                    report.witnesses.push_back({"not-partial-preserving",
                                                {k1, k2},
                                                {P.d(k1, k2), P.factor_x().dist(i1, i2)}});
                    return report;
                }
            }
    for (std::size_t i = 0; i < P.nx(); ++i)
        for (std::size_t j1 = 0; j1 < P.ny(); ++j1)
            for (std::size_t j2 = j1 + 1; j2 < P.ny(); ++j2) {
                const std::size_t k1 = P.index(i, j1), k2 = P.index(i, j2);
                if (!detail::close_rel(P.d(k1, k2), P.factor_y().dist(j1, j2), tol.rel_tol)) {
                    report.verdict = false;
                    report.witnesses.push_back({"not-partial-preserving",
                                                {k1, k2},
                                                {P.d(k1, k2), P.factor_y().dist(j1, j2)}});
                    return report;
                }
            }
    return report;
}

// d_inf <= d pointwise (first violation only).
inline CheckReport lower_bound_check(const ProductSpace& P, const ToleranceConfig& tol = {}) {
    CheckReport report;
    report.verdict = true;
    for (std::size_t k1 = 0; k1 < P.size(); ++k1)
        for (std::size_t k2 = k1 + 1; k2 < P.size(); ++k2)
            if (!detail::leq_rel(P.d_inf(k1, k2), P.d(k1, k2), tol.rel_tol)) {
                report.verdict = false;
                report.witnesses.push_back(
                    {"sandwich-violation", {k1, k2}, {P.d_inf(k1, k2), P.d(k1, k2), P.d_one(k1, k2)}});
                return report;
            }
    return report;
}

// d <= d_1 pointwise (first violation only).
inline CheckReport upper_bound_check(const ProductSpace& P, const ToleranceConfig& tol = {}) {
    CheckReport report;
    report.verdict = true;
    for (std::size_t k1 = 0; k1 < P.size(); ++k1)
        for (std::size_t k2 = k1 + 1; k2 < P.size(); ++k2)
            if (!detail::leq_rel(P.d(k1, k2), P.d_one(k1, k2), tol.rel_tol)) {
                report.verdict = false;
                report.witnesses.push_back(
                    {"sandwich-violation", {k1, k2}, {P.d_inf(k1, k2), P.d(k1, k2), P.d_one(k1, k2)}});
                return report;
            }
    return report;
}

// d_inf <= d <= d_1 pointwise; every violating pair is reported.
inline CheckReport sandwich_check(const ProductSpace& P, const ToleranceConfig& tol = {}) {
    CheckReport report;
    report.verdict = true;
    for (std::size_t k1 = 0; k1 < P.size(); ++k1)
        for (std::size_t k2 = k1 + 1; k2 < P.size(); ++k2) {
            const double lo = P.d_inf(k1, k2), mid = P.d(k1, k2), hi = P.d_one(k1, k2);
            if (!detail::leq_rel(lo, mid, tol.rel_tol) || !detail::leq_rel(mid, hi, tol.rel_tol)) {
                report.verdict = false;
                report.witnesses.push_back({"sandwich-violation", {k1, k2}, {lo, mid, hi}});
            }
        }
    return report;
}

// Budget for the quartic configuration scans. Above max_configs the scan draws
// `samples` random configurations from a fixed seed and flags the verdict as
// non-exhaustive.
struct ScanBudget {
    std::uint64_t max_configs = 100'000'000;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 0;
};

namespace detail {

struct ProductPair {
    std::size_t k1, k2;
    double dx, dy, d;
};

// unordered product-index pairs, degenerate ones included
inline std::vector<ProductPair> pair_table(const ProductSpace& P) {
    std::vector<ProductPair> pairs;
    pairs.reserve(P.size() * (P.size() + 1) / 2);
    for (std::size_t k1 = 0; k1 < P.size(); ++k1)
        for (std::size_t k2 = k1; k2 < P.size(); ++k2)
            pairs.push_back({k1, k2, P.dx(k1, k2), P.dy(k1, k2), P.d(k1, k2)});
    return pairs;
}

}  // namespace detail

// Monotonicity in both partial distances simultaneously: whenever
// dx(p) <= dx(q) and dy(p) <= dy(q) for product pairs p, q, also d(p) <= d(q).
inline CheckReport is_distance_increasing(const ProductSpace& P, const ToleranceConfig& tol = {},
                                          const ScanBudget& budget = {}) {
    const auto pairs = detail::pair_table(P);
    CheckReport report;
    report.verdict = true;

    auto violates = [&](const detail::ProductPair& a, const detail::ProductPair& b) {
        return a.dx <= b.dx && a.dy <= b.dy && !detail::leq_rel(a.d, b.d, tol.rel_tol);
    };
    auto record = [&](const detail::ProductPair& a, const detail::ProductPair& b) {
        report.verdict = false;
        report.witnesses.push_back({"not-distance-increasing",
                                    {a.k1, a.k2, b.k1, b.k2},
                                    {a.dx, a.dy, a.d, b.dx, b.dy, b.d}});
    };

    const std::uint64_t configs =
        static_cast<std::uint64_t>(pairs.size()) * static_cast<std::uint64_t>(pairs.size());
    if (configs <= budget.max_configs) {
        for (const auto& a : pairs)
            for (const auto& b : pairs)
                if (violates(a, b)) {
                    record(a, b);
                    return report;
                }
    } else {
        report.exhaustive = false;
        std::mt19937_64 eng(budget.seed);
        for (std::uint64_t it = 0; it < budget.samples; ++it) {
            const auto& a = pairs[eng() % pairs.size()];
            const auto& b = pairs[eng() % pairs.size()];
            if (violates(a, b)) {
                record(a, b);
                return report;
            }
        }
    }
    return report;
}

struct QuasiMonotoneReport : CheckReport {
    double max_ratio = 0.0;  // max d(p)/d(q) over comparable configurations with d(q) > 0
};

// Relaxed monotonicity with constant 2: d(p) <= 2 d(q) on every comparable
// configuration. Requires the sandwich inequality to hold.
inline QuasiMonotoneReport quasi_monotone_check(const ProductSpace& P,
                                                const ToleranceConfig& tol = {},
                                                const ScanBudget& budget = {}) {
    if (!sandwich_check(P, tol).verdict)
        throw std::domain_error("quasi_monotone_check: sandwich inequality does not hold");

    const auto pairs = detail::pair_table(P);
    QuasiMonotoneReport report;
    report.verdict = true;

    auto visit = [&](const detail::ProductPair& a, const detail::ProductPair& b) {
        if (!(a.dx <= b.dx && a.dy <= b.dy)) return;
        if (b.d > 0.0) report.max_ratio = std::max(report.max_ratio, a.d / b.d);
        if (!detail::leq_rel(a.d, 2.0 * b.d, tol.rel_tol) && report.verdict) {
            report.verdict = false;
            report.witnesses.push_back({"quasi-monotone-ratio",
                                        {a.k1, a.k2, b.k1, b.k2},
                                        {a.dx, a.dy, a.d, b.dx, b.dy, b.d}});
        }
    };

    const std::uint64_t configs =
        static_cast<std::uint64_t>(pairs.size()) * static_cast<std::uint64_t>(pairs.size());
    if (configs <= budget.max_configs) {
        for (const auto& a : pairs)
            for (const auto& b : pairs) visit(a, b);
    } else {
        report.exhaustive = false;
        std::mt19937_64 eng(budget.seed);
        for (std::uint64_t it = 0; it < budget.samples; ++it)
            visit(pairs[eng() % pairs.size()], pairs[eng() % pairs.size()]);
    }
    return report;
}

struct FactorEntry {
    double dx, dy, d;
};

// The factoring F of the product metric through attained partial-distance
// pairs, when it exists.
struct FactorTable {
    std::vector<FactorEntry> entries;  // sorted by (dx, dy)
    std::vector<double> domain_x;      // attained d_X values
    std::vector<double> domain_y;      // attained d_Y values
};

namespace detail {

inline std::vector<double> attained_values(const FiniteMetricSpace& s, const ToleranceConfig& tol) {
    std::vector<double> vals;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i; j < s.size(); ++j) vals.push_back(s.dist(i, j));
    std::sort(vals.begin(), vals.end());
    std::vector<double> out;
    for (double v : vals)
        if (out.empty() || v - out.back() > tol.rel_tol * std::max(v, 1e-300)) out.push_back(v);
    return out;
}

inline std::size_t bucket_of(const std::vector<double>& reps, double v, double rel) {
    auto it = std::upper_bound(reps.begin(), reps.end(), v);
    if (it != reps.begin()) {
        const double lo = *(it - 1);
        if (v - lo <= rel * std::max(v, 1e-300)) return static_cast<std::size_t>(it - reps.begin()) - 1;
    }
    return static_cast<std::size_t>(it - reps.begin());  // exact grid values always match
}

}  // namespace detail

// Groups product point-pairs by their partial-distance key. Returns the table
// when each key determines a single d-value; otherwise a witness of two pairs
// with equal keys and different d-values.
inline std::variant<FactorTable, WitnessRecord> factor_function(const ProductSpace& P,
                                                                const ToleranceConfig& tol = {}) {
    const auto bx = detail::attained_values(P.factor_x(), tol);
    const auto by = detail::attained_values(P.factor_y(), tol);

    struct Group {
        std::size_t k1 = 0, k2 = 0;  // first pair seen (lex order)
        double d0 = 0.0;
        bool conflict = false;
        std::size_t c1 = 0, c2 = 0;  // first pair whose d differs from d0
        double d_other = 0.0;
        bool seen = false;
    };
    std::map<std::pair<std::size_t, std::size_t>, Group> groups;

    for (std::size_t k1 = 0; k1 < P.size(); ++k1)
        for (std::size_t k2 = k1; k2 < P.size(); ++k2) {
            const auto key = std::make_pair(detail::bucket_of(bx, P.dx(k1, k2), tol.rel_tol),
                                            detail::bucket_of(by, P.dy(k1, k2), tol.rel_tol));
            auto& g = groups[key];
            const double d = P.d(k1, k2);
            if (!g.seen) {
                g = {k1, k2, d, false, 0, 0, 0.0, true};
            } else if (!g.conflict && !detail::close_rel(d, g.d0, tol.rel_tol)) {
                g.conflict = true;
                g.c1 = k1;
                g.c2 = k2;
                g.d_other = d;
            }
        }

    for (const auto& [key, g] : groups)
        if (g.conflict)
            return WitnessRecord{"no-factor-function",
                                 {g.k1, g.k2, g.c1, g.c2},
                                 {bx[key.first], by[key.second], g.d0, g.d_other}};

    FactorTable table;
    table.domain_x = bx;
    table.domain_y = by;
    for (const auto& [key, g] : groups)
        table.entries.push_back({bx[key.first], by[key.second], g.d0});
    return table;
}

// d((x1,y1),(x2,y2)) = d((x2,y1),(x1,y2)) for all factor pairs.
inline CheckReport swap_symmetry_check(const ProductSpace& P, const ToleranceConfig& tol = {}) {
    CheckReport report;
    report.verdict = true;
    for (std::size_t i1 = 0; i1 < P.nx(); ++i1)
        for (std::size_t i2 = i1 + 1; i2 < P.nx(); ++i2)
            for (std::size_t j1 = 0; j1 < P.ny(); ++j1)
                for (std::size_t j2 = j1 + 1; j2 < P.ny(); ++j2) {
                    const double straight = P.d(P.index(i1, j1), P.index(i2, j2));
                    const double swapped = P.d(P.index(i2, j1), P.index(i1, j2));
                    if (!detail::close_rel(straight, swapped, tol.rel_tol)) {
                        report.verdict = false;
                        report.witnesses.push_back({"swap-asymmetry",
                                                    {P.index(i1, j1), P.index(i2, j2),
                                                     P.index(i2, j1), P.index(i1, j2)},
                                                    {straight, swapped}});
                        return report;
                    }
                }
    return report;
}

// min{d((x1,y1),(x2,y2)), d((x2,y1),(x1,y2))} coincides with d_inf.
inline CheckReport min_condition_check(const ProductSpace& P, const ToleranceConfig& tol = {}) {
    CheckReport report;
    report.verdict = true;
    for (std::size_t i1 = 0; i1 < P.nx(); ++i1)
        for (std::size_t i2 = i1; i2 < P.nx(); ++i2)
            for (std::size_t j1 = 0; j1 < P.ny(); ++j1)
                for (std::size_t j2 = j1; j2 < P.ny(); ++j2) {
                    if (i1 == i2 && j1 == j2) continue;
                    const std::size_t ka = P.index(i1, j1), kb = P.index(i2, j2);
                    const std::size_t kc = P.index(i2, j1), kd = P.index(i1, j2);
                    const double lhs = std::min(P.d(ka, kb), P.d(kc, kd));
                    const double rhs = P.d_inf(ka, kb);
                    if (!detail::close_rel(lhs, rhs, tol.rel_tol)) {
                        report.verdict = false;
                        report.witnesses.push_back(
                            {"min-condition-violation", {ka, kb, kc, kd}, {lhs, rhs}});
                        return report;
                    }
                }
    return report;
}

}  // namespace metricpack
