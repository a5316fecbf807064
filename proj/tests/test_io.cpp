#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <metricpack/generators.hpp>
#include <metricpack/io.hpp>

using namespace metricpack;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("space JSON round-trips bit-exactly", "[io]") {
    const auto space = gen_random_metric({7, 404, GenMode::euclidean, 3});
    const auto back = space_from_json(json::parse(to_json(space).dump()));
    CHECK(back.matrix() == space.matrix());
    CHECK(back.labels() == space.labels());
}

TEST_CASE("CSV matrices parse with default labels", "[io]") {
    const auto path = temp_file("mp_csv_matrix.csv", "0,1,2\n1,0,1\n2,1,0\n");
    const auto space = parse_space_file(path.string());
    CHECK(space.size() == 3);
    CHECK(space.label(0) == "p0");
    CHECK(space.dist(0, 2) == 2.0);

    const auto one = temp_file("mp_csv_single.csv", "0\n");
    CHECK(parse_space_file(one.string()).size() == 1);
}

TEST_CASE("CSV parse errors carry positions", "[io]") {
    const auto ragged = temp_file("mp_csv_ragged.csv", "0,1\n1\n");
    CHECK_THROWS_AS(parse_space_file(ragged.string()), ParseError);
    const auto alpha = temp_file("mp_csv_alpha.csv", "0,x\nx,0\n");
    CHECK_THROWS_WITH(parse_space_file(alpha.string()),
                      Catch::Matchers::ContainsSubstring("line 1, column 2"));
}

TEST_CASE("invalid metrics surface their validation report", "[io]") {
    const auto path = temp_file("mp_asym.csv", "0,1\n2,0\n");
    try {
        parse_space_file(path.string());
        FAIL("expected MetricValidationError");
    } catch (const MetricValidationError& e) {
        REQUIRE_FALSE(e.report().ok);
        CHECK(e.report().violations.front().kind == MetricViolation::Kind::asymmetry);
    }
}

TEST_CASE("point files build the requested metric", "[io]") {
    const auto line = temp_file("mp_pts_line.csv", "0\n1\n2\n");
    const auto collinear = parse_points_file(line.string(), PointMetric::euclidean);
    CHECK(collinear.dist(0, 2) == 2.0);

    const auto right = temp_file("mp_pts_right.csv", "0,0\n3,0\n0,4\n");
    const auto triangle = parse_points_file(right.string(), PointMetric::euclidean);
    CHECK(triangle.dist(1, 2) == 5.0);

    const auto diag = temp_file("mp_pts_diag.csv", "x,y\n0,0\n1,1\n");
    CHECK(parse_points_file(diag.string(), PointMetric::chebyshev).dist(0, 1) == 1.0);
    CHECK(parse_points_file(diag.string(), PointMetric::manhattan).dist(0, 1) == 2.0);

    const auto ragged = temp_file("mp_pts_ragged.csv", "0,0\n1\n");
    CHECK_THROWS_AS(parse_points_file(ragged.string(), PointMetric::euclidean), ParseError);
}

TEST_CASE("product JSON round-trips", "[io]") {
    const auto quad = fixture_unit_quad(2.0);
    const auto back = product_from_json(json::parse(to_json(quad).dump()));
    CHECK(back.product().matrix() == quad.product().matrix());
    CHECK(back.factor_x().matrix() == quad.factor_x().matrix());
    CHECK(back.factor_y().labels() == quad.factor_y().labels());

    auto j = to_json(quad);
    j["matrix"].erase(0);
    CHECK_THROWS_AS(product_from_json(j), ParseError);
}

TEST_CASE("extended positive values serialize as number or inf", "[io]") {
    CHECK(to_json(ExtendedPositive::finite(2.0)).dump() == "2.0");
    CHECK(to_json(ExtendedPositive::infinite()).dump() == "\"inf\"");
}

TEST_CASE("profile CSV has the documented header", "[io]") {
    const FiniteMetricSpace two({{0, 1}, {1, 0}});
    const auto csv = profile_csv(entropy_profile(two, two.all()));
    CHECK(csv.rfind("eps,N,M,Mhat,N_ambient,optimal\n", 0) == 0);
    CHECK(csv.find("0.5,2,2,2,2,1") != std::string::npos);
    CHECK(csv.find("1,1,1,1,1,1") != std::string::npos);
}

TEST_CASE("suite reports serialize with stable fields", "[io]") {
    SuiteReport r;
    r.suite = "demo";
    r.verdict = Verdict::indeterminate;
    r.cases_run = 3;
    const auto j = to_json(r);
    CHECK(j["suite"] == "demo");
    CHECK(j["verdict"] == "indeterminate");
    CHECK(j["cases_run"] == 3);
    CHECK(j["witnesses"].is_array());
}

TEST_CASE("index lists parse leniently and reject junk", "[io]") {
    CHECK(parse_index_list("0,2, 5") == std::vector<std::size_t>{0, 2, 5});
    CHECK_THROWS_AS(parse_index_list("1,foo"), ParseError);
    CHECK_THROWS_AS(parse_index_list("1.5"), ParseError);
}
