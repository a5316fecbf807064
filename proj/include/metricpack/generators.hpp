#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "products.hpp"
#include "space.hpp"

namespace metricpack {

enum class GenMode { euclidean, range12, dendrogram };

struct GeneratorConfig {
    std::size_t n = 1;
    std::uint64_t seed = 0;
    GenMode mode = GenMode::euclidean;
    std::size_t dim = 1;  // euclidean only
};

namespace detail {

// uniform in [0, 1), stable across platforms (mt19937_64 is fully specified)
inline double unit_uniform(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// euclidean: n points uniform in [0,1]^dim with Euclidean distances.
// range12:   symmetric entries uniform in [1,2]; the triangle inequality is
//            automatic since every entry is at most 2 <= 1 + 1.
inline FiniteMetricSpace gen_random_metric(const GeneratorConfig& cfg,
                                           const ToleranceConfig& tol = {}) {
    if (cfg.n < 1) throw std::invalid_argument("gen_random_metric: n must be >= 1");
    std::mt19937_64 eng(cfg.seed);
    Matrix m(cfg.n, std::vector<double>(cfg.n, 0.0));
    switch (cfg.mode) {
        case GenMode::euclidean: {
            if (cfg.dim < 1) throw std::invalid_argument("gen_random_metric: dim must be >= 1");
            std::vector<std::vector<double>> pts(cfg.n, std::vector<double>(cfg.dim));
            for (auto& p : pts)
                for (auto& c : p) c = detail::unit_uniform(eng);
            for (std::size_t i = 0; i < cfg.n; ++i)
                for (std::size_t j = i + 1; j < cfg.n; ++j) {
                    double sq = 0.0;
                    for (std::size_t k = 0; k < cfg.dim; ++k) {
                        const double diff = pts[i][k] - pts[j][k];
                        sq += diff * diff;
                    }
                    m[i][j] = m[j][i] = std::sqrt(sq);
                }
            break;
        }
        case GenMode::range12: {
            for (std::size_t i = 0; i < cfg.n; ++i)
                for (std::size_t j = i + 1; j < cfg.n; ++j)
                    m[i][j] = m[j][i] = 1.0 + detail::unit_uniform(eng);
            break;
        }
        case GenMode::dendrogram:
            throw std::invalid_argument("gen_random_metric: use gen_random_ultrametric for dendrograms");
    }
    return FiniteMetricSpace(m, tol);
}

// Random binary merge tree over n leaves with strictly increasing merge
// heights in (0, 1]; d(x, y) is the merge height of the lowest common
// ancestor, which is an ultrametric by construction.
inline FiniteMetricSpace gen_random_ultrametric(const GeneratorConfig& cfg,
                                                const ToleranceConfig& tol = {}) {
    if (cfg.n < 1) throw std::invalid_argument("gen_random_ultrametric: n must be >= 1");
    std::mt19937_64 eng(cfg.seed);
    Matrix m(cfg.n, std::vector<double>(cfg.n, 0.0));
    std::vector<std::vector<std::size_t>> clusters;
    clusters.reserve(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) clusters.push_back({i});
    const std::size_t merges = cfg.n - 1;
    for (std::size_t step = 0; step < merges; ++step) {
        // height strictly inside (step/merges, (step+1)/merges]
        const double h =
            (static_cast<double>(step) + (1.0 - detail::unit_uniform(eng))) / static_cast<double>(merges);
        std::size_t a = static_cast<std::size_t>(eng() % clusters.size());
        std::size_t b = static_cast<std::size_t>(eng() % (clusters.size() - 1));
        if (b >= a) ++b;
        if (a > b) std::swap(a, b);
        for (std::size_t p : clusters[a])
            for (std::size_t q : clusters[b]) m[p][q] = m[q][p] = h;
        clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
    }
    return FiniteMetricSpace(m, tol);
}

// The two-level space with a marked point `a`: d = 1 on pairs touching `a`
// and 2^(1/t) on the rest. Its betweenness exponent is exactly t.
inline FiniteMetricSpace gen_example_two_level(std::size_t cardinality, double t,
                                               const ToleranceConfig& tol = {}) {
    if (cardinality < 3)
        throw std::domain_error("gen_example_two_level: cardinality must be at least 3");
    if (!(t >= 1.0)) throw std::domain_error("gen_example_two_level: t must be >= 1");
    const double far = std::pow(2.0, 1.0 / t);
    Matrix m(cardinality, std::vector<double>(cardinality, 0.0));
    for (std::size_t i = 0; i < cardinality; ++i)
        for (std::size_t j = i + 1; j < cardinality; ++j)
            m[i][j] = m[j][i] = (i != 0 && j != 0) ? far : 1.0;
    std::vector<std::string> labels;
    labels.reserve(cardinality);
    labels.push_back("a");
    for (std::size_t i = 1; i < cardinality; ++i) labels.push_back("x" + std::to_string(i));
    return FiniteMetricSpace(std::move(labels), m, tol);
}

// 3x3 product fixture whose metric is sandwiched between d_inf and d_1 but is
// not distance-increasing; both factors are the path 1-2-3 with d = |i-j|.
inline ProductSpace fixture_path_grid(const ToleranceConfig& tol = {}) {
    const Matrix factor = {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}};
    const FiniteMetricSpace X({"x1", "x2", "x3"}, factor, tol);
    const FiniteMetricSpace Y({"y1", "y2", "y3"}, factor, tol);
    const Matrix m = {
        {0, 1, 2, 1, 1, 2, 2, 2, 2},
        {1, 0, 1, 1, 1, 2, 2, 2, 2},
        {2, 1, 0, 2, 2, 1, 2, 2, 2},
        {1, 1, 2, 0, 1, 2, 1, 2, 2},
        {1, 1, 2, 1, 0, 1, 2, 1, 2},
        {2, 2, 1, 2, 1, 0, 2, 2, 1},
        {2, 2, 2, 1, 2, 2, 0, 1, 2},
        {2, 2, 2, 2, 1, 2, 1, 0, 1},
        {2, 2, 2, 2, 2, 1, 2, 1, 0},
    };
    return product_custom(X, Y, m, tol);
}

// 2x2 product fixture over unit-distance factors with one adjustable diagonal
// distance a in [1, 2]: partial distance-preserving, d_inf <= d, ultrametric
// exactly when a = 1.
inline ProductSpace fixture_unit_quad(double a, const ToleranceConfig& tol = {}) {
    if (!(a >= 1.0) || !(a <= 2.0)) throw std::domain_error("fixture_unit_quad: a must lie in [1, 2]");
    const Matrix factor = {{0, 1}, {1, 0}};
    const FiniteMetricSpace X({"x1", "x2"}, factor, tol);
    const FiniteMetricSpace Y({"y1", "y2"}, factor, tol);
    const Matrix m = {
        {0, 1, 1, a},
        {1, 0, 1, 1},
        {1, 1, 0, 1},
        {a, 1, 1, 0},
    };
    return product_custom(X, Y, m, tol);
}

}  // namespace metricpack
