#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <metricpack/betweenness.hpp>
#include <metricpack/cover_pack.hpp>
#include <metricpack/generators.hpp>

using namespace metricpack;

TEST_CASE("generators are deterministic per seed", "[generators]") {
    for (auto mode : {GenMode::euclidean, GenMode::range12}) {
        const auto a = gen_random_metric({7, 123, mode, 2});
        const auto b = gen_random_metric({7, 123, mode, 2});
        const auto c = gen_random_metric({7, 124, mode, 2});
        CHECK(a.matrix() == b.matrix());
        CHECK(a.matrix() != c.matrix());
    }
    const auto u1 = gen_random_ultrametric({9, 55, GenMode::dendrogram});
    const auto u2 = gen_random_ultrametric({9, 55, GenMode::dendrogram});
    CHECK(u1.matrix() == u2.matrix());
}

TEST_CASE("generator outputs are valid metrics", "[generators]") {
    CHECK(gen_random_metric({1, 0, GenMode::euclidean, 1}).size() == 1);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CHECK(validate_metric(gen_random_metric({5, seed, GenMode::range12}).matrix()).ok);
        CHECK(validate_metric(gen_random_metric({5, seed, GenMode::euclidean, 3}).matrix()).ok);
        CHECK(validate_metric(gen_random_ultrametric({5, seed, GenMode::dendrogram}).matrix()).ok);
    }
}

TEST_CASE("dendrograms are ultrametric with infinite exponent", "[generators]") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const auto um = gen_random_ultrametric({2 + seed % 11, seed, GenMode::dendrogram});
        CHECK(is_ultrametric(um).verdict);
        CHECK(betweenness_exponent(um).is_infinite());
    }
    const auto two = gen_random_ultrametric({2, 7, GenMode::dendrogram});
    CHECK(two.size() == 2);
    CHECK(two.dist(0, 1) > 0.0);
    CHECK(two.dist(0, 1) <= 1.0);
}

TEST_CASE("a three-leaf dendrogram has an isosceles triple", "[generators]") {
    const auto um = gen_random_ultrametric({3, 11, GenMode::dendrogram});
    std::vector<double> d = {um.dist(0, 1), um.dist(0, 2), um.dist(1, 2)};
    std::sort(d.begin(), d.end());
    CHECK(d[1] == d[2]);  // the two largest merge at the root height
    CHECK(d[0] < d[2]);
}

TEST_CASE("collinear unit points have exponent one", "[generators]") {
    const FiniteMetricSpace line({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
    CHECK(betweenness_exponent(line).value() == 1.0);
}

TEST_CASE("two-level space has the prescribed exponent and distances", "[generators]") {
    const auto t1 = gen_example_two_level(5, 1.0);
    CHECK(t1.label(0) == "a");
    CHECK(t1.dist(0, 1) == 1.0);
    CHECK(t1.dist(1, 2) == 2.0);
    CHECK(betweenness_exponent(t1).value() == 1.0);

    const auto t2 = gen_example_two_level(6, 2.0);
    CHECK(t2.dist(1, 2) == Catch::Approx(std::sqrt(2.0)));
    CHECK(betweenness_exponent(t2).value() == Catch::Approx(2.0).margin(1e-9));

    CHECK_THROWS_AS(gen_example_two_level(2, 1.0), std::domain_error);
    CHECK_THROWS_AS(gen_example_two_level(5, 0.5), std::domain_error);
}

TEST_CASE("two-level covering splits by center pool", "[generators]") {
    for (double t : {1.0, 2.0}) {
        const auto space = gen_example_two_level(5, t);
        SubsetMask w = space.all();
        w.reset(0);
        const double eps = 0.5 * (1.0 + std::pow(2.0, 1.0 / t));  // inside ]1, 2^(1/t)[
        CHECK(covering_number(space, w, w, eps).count == 4);
        CHECK(covering_number(space, w, space.all(), eps).count == 1);
        CHECK(min_maximal_packing(space, space.all(), eps).count == 1);
    }
}

TEST_CASE("path-grid fixture matches its published entries", "[generators]") {
    const auto grid = fixture_path_grid();
    CHECK(grid.factor_x().dist(0, 2) == 2.0);
    CHECK(grid.d(grid.index(0, 0), grid.index(1, 1)) == 1.0);
    CHECK(grid.d(grid.index(1, 1), grid.index(2, 2)) == 2.0);
    CHECK(grid.d(grid.index(0, 0), grid.index(2, 2)) == 2.0);
    CHECK(validate_metric(grid.product().matrix()).ok);
    CHECK(is_partial_distance_preserving(grid).verdict);
}

TEST_CASE("unit-quad fixture ultrametricity depends on the diagonal", "[generators]") {
    CHECK(is_ultrametric(fixture_unit_quad(1.0).product()).verdict);
    CHECK_FALSE(is_ultrametric(fixture_unit_quad(2.0).product()).verdict);
    CHECK_FALSE(is_ultrametric(fixture_unit_quad(1.5).product()).verdict);
    for (double a : {1.0, 1.25, 1.75, 2.0}) {
        const auto quad = fixture_unit_quad(a);
        CHECK(is_partial_distance_preserving(quad).verdict);
        CHECK(lower_bound_check(quad).verdict);
    }
    CHECK_THROWS_AS(fixture_unit_quad(0.9), std::domain_error);
    CHECK_THROWS_AS(fixture_unit_quad(2.1), std::domain_error);
}
