#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "report.hpp"
#include "subset_mask.hpp"
#include "tolerance.hpp"

namespace metricpack {

using Matrix = std::vector<std::vector<double>>;

struct MetricViolation {
    enum class Kind { asymmetry, nonzero_diagonal, nonpositive, triangle };
    Kind kind;
    std::vector<std::size_t> indices;  // pair, or triple (i, j, k) with d(i,j) > d(i,k) + d(k,j)
    double magnitude = 0.0;
};

inline const char* to_string(MetricViolation::Kind k) {
    switch (k) {
        case MetricViolation::Kind::asymmetry: return "asymmetry";
        case MetricViolation::Kind::nonzero_diagonal: return "nonzero-diagonal";
        case MetricViolation::Kind::nonpositive: return "nonpositive";
        case MetricViolation::Kind::triangle: return "triangle";
    }
    return "?";
}

struct ValidationReport {
    bool ok = true;
    std::vector<MetricViolation> violations;
};

class MetricValidationError : public std::runtime_error {
public:
    explicit MetricValidationError(ValidationReport report)
        : std::runtime_error(describe(report)), report_(std::move(report)) {}

    const ValidationReport& report() const { return report_; }

private:
    static std::string describe(const ValidationReport& r) {
        std::ostringstream os;
        os << "matrix is not a metric: " << r.violations.size() << " violation(s)";
        if (!r.violations.empty()) {
            const auto& v = r.violations.front();
            os << "; first: " << to_string(v.kind) << " at (";
            for (std::size_t i = 0; i < v.indices.size(); ++i)
                os << (i ? "," : "") << v.indices[i];
            os << ") magnitude " << v.magnitude;
        }
        return os.str();
    }

    ValidationReport report_;
};

// Checks the four metric axioms on a raw matrix. The triangle inequality is
// allowed rel_tol relative slack (scaled by the largest distance involved);
// the other axioms are exact. Structural defects (empty, non-square,
// non-finite entries) throw std::invalid_argument.
inline ValidationReport validate_metric(const Matrix& m, const ToleranceConfig& tol = {}) {
    tol.validate();
    const std::size_t n = m.size();
    if (n == 0) throw std::invalid_argument("validate_metric: empty matrix");
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw std::invalid_argument("validate_metric: matrix is not square");
        for (double v : m[i])
            if (!std::isfinite(v)) throw std::invalid_argument("validate_metric: non-finite entry");
    }

    ValidationReport report;
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i][i] != 0.0)
            report.violations.push_back({MetricViolation::Kind::nonzero_diagonal, {i, i}, std::abs(m[i][i])});
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (m[i][j] != m[j][i])
                report.violations.push_back({MetricViolation::Kind::asymmetry, {i, j}, std::abs(m[i][j] - m[j][i])});
            if (!(m[i][j] > 0.0))
                report.violations.push_back({MetricViolation::Kind::nonpositive, {i, j}, -m[i][j]});
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const double direct = m[i][j];
                const double via = m[i][k] + m[k][j];
                const double scale = std::max({m[i][j], m[i][k], m[k][j]});
                if (direct > via + tol.rel_tol * scale)
                    report.violations.push_back({MetricViolation::Kind::triangle, {i, j, k}, direct - via});
            }
        }
    }
    report.ok = report.violations.empty();
    return report;
}

// An immutable finite metric space: labelled points plus a validated
// symmetric distance matrix, stored row-major.
class FiniteMetricSpace {
public:
    FiniteMetricSpace(std::vector<std::string> labels, const Matrix& matrix,
                      const ToleranceConfig& tol = {})
        : labels_(std::move(labels)), n_(matrix.size()) {
        if (labels_.size() != n_)
            throw std::invalid_argument("FiniteMetricSpace: label count does not match matrix size");
        auto report = validate_metric(matrix, tol);
        if (!report.ok) throw MetricValidationError(std::move(report));
        dist_.reserve(n_ * n_);
        for (const auto& row : matrix) dist_.insert(dist_.end(), row.begin(), row.end());
    }

    explicit FiniteMetricSpace(const Matrix& matrix, const ToleranceConfig& tol = {})
        : FiniteMetricSpace(default_labels(matrix.size()), matrix, tol) {}

    static std::vector<std::string> default_labels(std::size_t n) {
        std::vector<std::string> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back("p" + std::to_string(i));
        return out;
    }

    std::size_t size() const { return n_; }

    double dist(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }

    const std::string& label(std::size_t i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }

    Matrix matrix() const {
        Matrix out(n_, std::vector<double>(n_));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) out[i][j] = dist(i, j);
        return out;
    }

    SubsetMask all() const { return SubsetMask::full(n_); }

private:
    std::vector<std::string> labels_;
    std::size_t n_ = 0;
    std::vector<double> dist_;
};

namespace detail {

inline void require_mask(const FiniteMetricSpace& space, const SubsetMask& subset) {
    if (subset.universe() != space.size())
        throw std::invalid_argument("subset universe does not match the space");
}

inline void require_nonempty(const SubsetMask& subset, const char* what) {
    if (subset.empty()) throw std::domain_error(std::string(what) + ": empty subset");
}

}  // namespace detail

// Ultra-triangle test d(x,y) <= max{d(x,z), d(z,y)} over all triples inside
// `subset`, with exact comparisons. On failure the witness is the
// lexicographically first triple (a, b, c) with d(a,b) > max{d(a,c), d(b,c)}.
inline CheckReport is_ultrametric(const FiniteMetricSpace& space, const SubsetMask& subset) {
    detail::require_mask(space, subset);
    detail::require_nonempty(subset, "is_ultrametric");
    const auto idx = subset.indices();
    CheckReport report;
    report.verdict = true;
    for (std::size_t ai = 0; ai < idx.size(); ++ai) {
        for (std::size_t bi = ai + 1; bi < idx.size(); ++bi) {
            const std::size_t a = idx[ai], b = idx[bi];
            const double dab = space.dist(a, b);
            for (std::size_t c : idx) {
                if (c == a || c == b) continue;
                const double m = std::max(space.dist(a, c), space.dist(b, c));
                if (dab > m) {
                    report.verdict = false;
                    report.witnesses.push_back(
                        {"ultra-violation", {a, b, c}, {dab, space.dist(a, c), space.dist(b, c)}});
                    return report;
                }
            }
        }
    }
    return report;
}

inline CheckReport is_ultrametric(const FiniteMetricSpace& space) {
    return is_ultrametric(space, space.all());
}

// {x : d(x, center) <= r}, exact comparison.
inline SubsetMask closed_ball(const FiniteMetricSpace& space, std::size_t center, double r) {
    if (center >= space.size()) throw std::invalid_argument("closed_ball: center out of range");
    if (!(r >= 0.0)) throw std::domain_error("closed_ball: negative radius");
    SubsetMask ball(space.size());
    for (std::size_t i = 0; i < space.size(); ++i)
        if (space.dist(i, center) <= r) ball.set(i);
    return ball;
}

inline double diameter(const FiniteMetricSpace& space, const SubsetMask& subset) {
    detail::require_mask(space, subset);
    detail::require_nonempty(subset, "diameter");
    const auto idx = subset.indices();
    double best = 0.0;
    for (std::size_t ai = 0; ai < idx.size(); ++ai)
        for (std::size_t bi = ai + 1; bi < idx.size(); ++bi)
            best = std::max(best, space.dist(idx[ai], idx[bi]));
    return best;
}

// Induced subspace; retained indices keep their relative order.
inline FiniteMetricSpace restrict(const FiniteMetricSpace& space, const SubsetMask& subset,
                                  const ToleranceConfig& tol = {}) {
    detail::require_mask(space, subset);
    detail::require_nonempty(subset, "restrict");
    const auto idx = subset.indices();
    std::vector<std::string> labels;
    labels.reserve(idx.size());
    Matrix m(idx.size(), std::vector<double>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a) {
        labels.push_back(space.label(idx[a]));
        for (std::size_t b = 0; b < idx.size(); ++b) m[a][b] = space.dist(idx[a], idx[b]);
    }
    return FiniteMetricSpace(std::move(labels), m, tol);
}

// Sorted positive pairwise distances inside `subset`, deduplicated within
// rel_tol relative distance. The smallest member of each cluster is kept, so
// every returned value is verbatim from the matrix.
inline std::vector<double> distance_breakpoints(const FiniteMetricSpace& space,
                                                const SubsetMask& subset,
                                                const ToleranceConfig& tol = {}) {
    detail::require_mask(space, subset);
    detail::require_nonempty(subset, "distance_breakpoints");
    const auto idx = subset.indices();
    std::vector<double> values;
    for (std::size_t ai = 0; ai < idx.size(); ++ai)
        for (std::size_t bi = ai + 1; bi < idx.size(); ++bi)
            values.push_back(space.dist(idx[ai], idx[bi]));
    std::sort(values.begin(), values.end());
    std::vector<double> out;
    for (double v : values) {
        if (!(v > 0.0)) continue;
        if (out.empty() || v - out.back() > tol.rel_tol * v) out.push_back(v);
    }
    return out;
}

}  // namespace metricpack
