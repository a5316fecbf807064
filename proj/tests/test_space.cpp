#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <metricpack/generators.hpp>
#include <metricpack/space.hpp>

using namespace metricpack;

TEST_CASE("validate_metric accepts the one-point space", "[space]") {
    const auto report = validate_metric({{0.0}});
    CHECK(report.ok);
    CHECK(report.violations.empty());
}

TEST_CASE("validate_metric flags a triangle violation with its triple", "[space]") {
    // d(0,2) = 3 > d(0,1) + d(1,2) = 2
    const Matrix m = {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}};
    const auto report = validate_metric(m);
    REQUIRE_FALSE(report.ok);
    REQUIRE_FALSE(report.violations.empty());
    const auto& v = report.violations.front();
    CHECK(v.kind == MetricViolation::Kind::triangle);
    CHECK(v.indices == std::vector<std::size_t>{0, 2, 1});
    CHECK(v.magnitude == Catch::Approx(1.0));
}

TEST_CASE("validate_metric accepts the unit quad with a = 2", "[space]") {
    const Matrix m = {{0, 1, 1, 2}, {1, 0, 1, 1}, {1, 1, 0, 1}, {2, 1, 1, 0}};
    CHECK(validate_metric(m).ok);
}

TEST_CASE("validate_metric flags asymmetry, bad diagonal and nonpositive entries", "[space]") {
    const Matrix asym = {{0, 1}, {2, 0}};
    auto r = validate_metric(asym);
    REQUIRE_FALSE(r.ok);
    CHECK(r.violations.front().kind == MetricViolation::Kind::asymmetry);

    const Matrix diag = {{1.0}};
    r = validate_metric(diag);
    REQUIRE_FALSE(r.ok);
    CHECK(r.violations.front().kind == MetricViolation::Kind::nonzero_diagonal);

    const Matrix nonpos = {{0, 0}, {0, 0}};
    r = validate_metric(nonpos);
    REQUIRE_FALSE(r.ok);
    CHECK(r.violations.front().kind == MetricViolation::Kind::nonpositive);
}

TEST_CASE("validate_metric rejects structural defects", "[space]") {
    CHECK_THROWS_AS(validate_metric({}), std::invalid_argument);
    CHECK_THROWS_AS(validate_metric({{0, 1}, {1}}), std::invalid_argument);
    const double nan = std::nan("");
    CHECK_THROWS_AS(validate_metric({{0, nan}, {nan, 0}}), std::invalid_argument);
}

TEST_CASE("is_ultrametric on trivial and collinear spaces", "[space]") {
    const FiniteMetricSpace two({{0, 1}, {1, 0}});
    CHECK(is_ultrametric(two).verdict);

    // points 0, 1, 2 on the line
    const FiniteMetricSpace line({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
    const auto rep = is_ultrametric(line);
    REQUIRE_FALSE(rep.verdict);
    REQUIRE(rep.witnesses.size() == 1);
    CHECK(rep.witnesses.front().points == std::vector<std::size_t>{0, 2, 1});
}

TEST_CASE("is_ultrametric on the unit quad fixture", "[space]") {
    CHECK_FALSE(is_ultrametric(fixture_unit_quad(2.0).product()).verdict);
    CHECK(is_ultrametric(fixture_unit_quad(1.0).product()).verdict);
}

TEST_CASE("is_ultrametric rejects an empty subset", "[space]") {
    const FiniteMetricSpace two({{0, 1}, {1, 0}});
    CHECK_THROWS_AS(is_ultrametric(two, SubsetMask(2)), std::domain_error);
}

TEST_CASE("closed_ball basics", "[space]") {
    const FiniteMetricSpace line({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
    CHECK(closed_ball(line, 1, 0.0).indices() == std::vector<std::size_t>{1});

    const auto quad = fixture_unit_quad(2.0).product();
    CHECK(closed_ball(quad, 1, 1.0).count() == 4);  // center (x1,y2) reaches everything

    const auto two_level = gen_example_two_level(5, 1.0);
    CHECK(closed_ball(two_level, 0, 1.5).count() == 5);
}

TEST_CASE("diameter on fixtures", "[space]") {
    const auto grid = fixture_path_grid().product();
    CHECK(diameter(grid, grid.all()) == 2.0);

    const auto two_level = gen_example_two_level(4, 2.0);
    SubsetMask w = two_level.all();
    w.reset(0);
    CHECK(diameter(two_level, w) == Catch::Approx(std::sqrt(2.0)));

    const FiniteMetricSpace one(Matrix{{0.0}});
    CHECK(diameter(one, one.all()) == 0.0);
}

TEST_CASE("restrict preserves distances and order", "[space]") {
    const auto grid = fixture_path_grid().product();
    const auto full = restrict(grid, grid.all());
    CHECK(full.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < grid.size(); ++j) CHECK(full.dist(i, j) == grid.dist(i, j));

    // the diagonal points (x1,y1), (x2,y2), (x3,y3)
    const auto diag = restrict(grid, SubsetMask::from_indices(9, {0, 4, 8}));
    REQUIRE(diag.size() == 3);
    CHECK(diag.dist(0, 1) == 1.0);
    CHECK(diag.dist(0, 2) == 2.0);
    CHECK(diag.dist(1, 2) == 2.0);
    CHECK(diag.label(0) == "(x1,y1)");

    const auto single = restrict(grid, SubsetMask::from_indices(9, {5}));
    CHECK(single.size() == 1);
    CHECK(single.dist(0, 0) == 0.0);
}

TEST_CASE("distance_breakpoints on fixtures", "[space]") {
    const FiniteMetricSpace one(Matrix{{0.0}});
    CHECK(distance_breakpoints(one, one.all()).empty());

    const auto quad = fixture_unit_quad(2.0).product();
    CHECK(distance_breakpoints(quad, quad.all()) == std::vector<double>{1.0, 2.0});

    const auto two_level = gen_example_two_level(4, 2.0);
    const auto bps = distance_breakpoints(two_level, two_level.all());
    REQUIRE(bps.size() == 2);
    CHECK(bps[0] == 1.0);
    CHECK(bps[1] == Catch::Approx(std::sqrt(2.0)));
}

TEST_CASE("balls grow with the radius", "[space][property]") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const auto space = gen_random_metric({8, seed, GenMode::euclidean, 2});
        const auto bps = distance_breakpoints(space, space.all());
        for (std::size_t c = 0; c < space.size(); ++c)
            for (std::size_t i = 0; i + 1 < bps.size(); ++i)
                CHECK(closed_ball(space, c, bps[i]).is_subset_of(closed_ball(space, c, bps[i + 1])));
    }
}

TEST_CASE("restrict commutes with the ultrametric test on every subset", "[space][property]") {
    const auto spaces = {gen_random_metric({6, 5, GenMode::range12}),
                         gen_random_ultrametric({6, 6, GenMode::dendrogram})};
    for (const auto& space : spaces) {
        const std::size_t n = space.size();
        for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
            SubsetMask sub(n);
            for (std::size_t i = 0; i < n; ++i)
                if ((mask >> i) & 1u) sub.set(i);
            if (sub.count() < 3) continue;
            const bool direct = is_ultrametric(space, sub).verdict;
            const bool restricted = is_ultrametric(restrict(space, sub)).verdict;
            CHECK(direct == restricted);
        }
    }
}

TEST_CASE("ultrametric balls have diameter at most their radius", "[space][property]") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto space = gen_random_ultrametric({1 + seed % 12, seed, GenMode::dendrogram});
        for (double r : distance_breakpoints(space, space.all()))
            for (std::size_t c = 0; c < space.size(); ++c)
                CHECK(diameter(space, closed_ball(space, c, r)) <= r);
    }
}

TEST_CASE("validate_metric accepts every restriction of a valid space", "[space][property]") {
    const auto space = gen_random_metric({7, 99, GenMode::euclidean, 3});
    std::mt19937_64 eng(7);
    for (int trial = 0; trial < 30; ++trial) {
        SubsetMask sub(space.size());
        for (std::size_t i = 0; i < space.size(); ++i)
            if (eng() & 1u) sub.set(i);
        if (sub.empty()) continue;
        CHECK(validate_metric(restrict(space, sub).matrix()).ok);
    }
}
