#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <metricpack/cover_pack.hpp>
#include <metricpack/generators.hpp>

#include "oracle.hpp"

using namespace metricpack;

namespace {

bool is_eps_net(const FiniteMetricSpace& space, const SubsetMask& W, const SubsetMask& centers,
                double eps) {
    for (std::size_t w : W.indices()) {
        bool hit = false;
        for (std::size_t c : centers.indices())
            if (space.dist(w, c) <= eps) {
                hit = true;
                break;
            }
        if (!hit) return false;
    }
    return true;
}

bool is_distinguishable(const FiniteMetricSpace& space, const SubsetMask& points, double eps) {
    const auto idx = points.indices();
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size(); ++j)
            if (space.dist(idx[i], idx[j]) <= eps) return false;
    return true;
}

}  // namespace

TEST_CASE("covering_number basics", "[cover]") {
    const FiniteMetricSpace one(Matrix{{0.0}});
    CHECK(covering_number(one, one.all(), one.all(), 0.5).count == 1);

    const auto quad = fixture_unit_quad(2.0).product();
    const auto r = covering_number(quad, quad.all(), quad.all(), 1.0);
    CHECK(r.count == 1);
    CHECK(r.optimal);
    CHECK(is_eps_net(quad, quad.all(), r.centers, 1.0));
}

TEST_CASE("covering_number distinguishes center pools", "[cover]") {
    // two-level space: removing the hub makes the remainder spread out
    const auto space = gen_example_two_level(5, 1.0);
    SubsetMask w = space.all();
    w.reset(0);
    CHECK(covering_number(space, w, w, 1.5).count == 4);
    CHECK(covering_number(space, w, space.all(), 1.5).count == 1);
}

TEST_CASE("covering_number reports uncoverable points", "[cover]") {
    const FiniteMetricSpace line({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
    const auto far = SubsetMask::from_indices(3, {0});
    try {
        covering_number(line, line.all(), far, 0.5);
        FAIL("expected UncoverableError");
    } catch (const UncoverableError& e) {
        CHECK(e.orphan() == 1);
    }
    CHECK_THROWS_AS(covering_number(line, SubsetMask(3), line.all(), 1.0), std::domain_error);
    CHECK_THROWS_AS(covering_number(line, line.all(), line.all(), 0.0), std::domain_error);
}

TEST_CASE("packing_number trivial thresholds", "[pack]") {
    const auto space = gen_random_metric({6, 1, GenMode::range12});
    const auto bps = distance_breakpoints(space, space.all());
    CHECK(packing_number(space, space.all(), bps.back()).count == 1);
    CHECK(packing_number(space, space.all(), bps.front() / 2).count == 6);
}

TEST_CASE("packing_number on the unit quad", "[pack]") {
    const auto quad = fixture_unit_quad(2.0).product();
    const auto r = packing_number(quad, quad.all(), 1.0);
    CHECK(r.count == 2);
    CHECK(r.optimal);
    CHECK(is_distinguishable(quad, r.points, 1.0));
    CHECK(r.points.indices() == std::vector<std::size_t>{0, 3});
    CHECK(oracle::pack_number(quad, quad.all(), 1.0) == 2);
}

TEST_CASE("min_maximal_packing trivial thresholds", "[pack]") {
    const auto space = gen_random_metric({6, 2, GenMode::range12});
    const auto bps = distance_breakpoints(space, space.all());
    CHECK(min_maximal_packing(space, space.all(), bps.back()).count == 1);
    CHECK(min_maximal_packing(space, space.all(), bps.front() / 2).count == 6);
}

TEST_CASE("min_maximal_packing on the two-level space", "[pack]") {
    const auto space = gen_example_two_level(6, 2.0);
    SubsetMask w = space.all();
    w.reset(0);
    const double eps = 0.5 * (1.0 + std::sqrt(2.0));  // inside ]1, 2^(1/2)[
    const auto r = min_maximal_packing(space, w, eps);
    CHECK(r.count == 5);
    CHECK(is_distinguishable(space, r.points, eps));
}

TEST_CASE("witnesses stay valid even on tight node budgets", "[cover][pack]") {
    const auto space = gen_random_metric({12, 9, GenMode::euclidean, 2});
    const auto bps = distance_breakpoints(space, space.all());
    const double eps = bps[bps.size() / 2];
    SolverLimits tight;
    tight.max_nodes = 1;
    const auto cover = covering_number(space, space.all(), space.all(), eps, tight);
    CHECK(is_eps_net(space, space.all(), cover.centers, eps));
    const auto pack = packing_number(space, space.all(), eps, tight);
    CHECK(is_distinguishable(space, pack.points, eps));
}

TEST_CASE("solvers agree with the exhaustive oracle", "[cover][pack][property]") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const auto mode = seed % 2 == 0 ? GenMode::euclidean : GenMode::range12;
        const auto space = gen_random_metric({2 + seed % 10, seed, mode, 2});
        const auto W = space.all();
        for (double eps : sweep_grid(distance_breakpoints(space, W))) {
            const auto cover = covering_number(space, W, W, eps);
            REQUIRE(cover.optimal);
            CHECK(cover.count == *oracle::cover_number(space, W, W, eps));
            CHECK(is_eps_net(space, W, cover.centers, eps));

            const auto pack = packing_number(space, W, eps);
            REQUIRE(pack.optimal);
            CHECK(pack.count == oracle::pack_number(space, W, eps));
            CHECK(is_distinguishable(space, pack.points, eps));

            const auto mm = min_maximal_packing(space, W, eps);
            REQUIRE(mm.optimal);
            CHECK(mm.count == oracle::min_maximal_pack(space, W, eps));
            CHECK(is_distinguishable(space, mm.points, eps));
        }
    }
}

TEST_CASE("chain_classical on fixtures", "[chain]") {
    const FiniteMetricSpace one(Matrix{{0.0}});
    auto rep = chain_classical(one, one.all(), 1.0);
    CHECK(rep.verdict == Verdict::pass);
    CHECK(rep.m_2eps.count == 1);
    CHECK(rep.n_eps.count == 1);
    CHECK(rep.m_eps.count == 1);

    const auto quad = fixture_unit_quad(2.0).product();
    rep = chain_classical(quad, quad.all(), 1.0);
    CHECK(rep.verdict == Verdict::pass);
    CHECK(rep.m_2eps.count == 1);  // nothing farther apart than 2
    CHECK(rep.n_eps.count == 1);
    CHECK(rep.m_eps.count == 2);
}

TEST_CASE("chain_classical holds at every grid point of random spaces", "[chain][property]") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto space = gen_random_metric({10, seed, GenMode::euclidean, 2});
        for (double eps : sweep_grid(distance_breakpoints(space, space.all()))) {
            const auto rep = chain_classical(space, space.all(), eps);
            CHECK(rep.verdict == Verdict::pass);
        }
    }
}

TEST_CASE("chain_refined on the two-level space", "[chain]") {
    const auto space = gen_example_two_level(5, 1.0);
    SubsetMask w = space.all();
    w.reset(0);
    const auto rep = chain_refined(space, w, 1.5, space.all());
    CHECK(rep.verdict == Verdict::pass);
    CHECK(rep.ambient_t0.value() == 1.0);
    CHECK(rep.scale == 2.0);
    CHECK(rep.m_scaled.count == 1);
    CHECK(rep.n_ambient.count == 1);
    CHECK(rep.n_hat.count == 4);
    CHECK(rep.m_hat.count == 4);
    CHECK(rep.m_star.count == 4);
}

TEST_CASE("chain_refined collapses on ultrametric spaces", "[chain]") {
    const auto um = gen_random_ultrametric({8, 23, GenMode::dendrogram});
    for (double eps : distance_breakpoints(um, um.all())) {
        const auto rep = chain_refined(um, um.all(), eps, um.all());
        REQUIRE(rep.verdict == Verdict::pass);
        CHECK(rep.ambient_t0.is_infinite());
        CHECK(rep.scale == 1.0);
        CHECK(rep.m_scaled.count == rep.m_star.count);
        CHECK(rep.n_ambient.count == rep.n_hat.count);
        CHECK(rep.n_hat.count == rep.m_hat.count);
        CHECK(rep.m_hat.count == rep.m_star.count);
    }
}

TEST_CASE("chain_refined checks the subset relation", "[chain]") {
    const auto space = gen_random_metric({4, 5, GenMode::range12});
    const auto sub = SubsetMask::from_indices(4, {0, 1});
    CHECK_THROWS_AS(chain_refined(space, space.all(), 1.0, sub), std::invalid_argument);
}

TEST_CASE("entropy_profile singleton and two-point spaces", "[profile]") {
    const FiniteMetricSpace one(Matrix{{0.0}});
    const auto p1 = entropy_profile(one, one.all());
    REQUIRE(p1.size() == 1);
    CHECK(p1.front().n == 1);
    CHECK(p1.front().m == 1);
    CHECK(p1.front().m_hat == 1);
    CHECK(p1.front().n_ambient == 1);

    const FiniteMetricSpace two({{0, 1}, {1, 0}});
    const auto p2 = entropy_profile(two, two.all());
    REQUIRE(p2.size() == 2);
    CHECK(p2[0].eps == 0.5);
    CHECK(p2[0].n == 2);
    CHECK(p2[0].m == 2);
    CHECK(p2[1].eps == 1.0);
    CHECK(p2[1].n == 1);
    CHECK(p2[1].m == 1);
}

TEST_CASE("entropy_profile of the unit quad matches the oracle", "[profile]") {
    const auto quad = fixture_unit_quad(2.0).product();
    const auto profile = entropy_profile(quad, quad.all());
    REQUIRE(profile.size() == 4);  // 0.5, 1, 1.5, 2
    const double expected_eps[] = {0.5, 1.0, 1.5, 2.0};
    const std::size_t expected_n[] = {4, 1, 1, 1};
    const std::size_t expected_m[] = {4, 2, 2, 1};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(profile[i].eps == expected_eps[i]);
        CHECK(profile[i].n == expected_n[i]);
        CHECK(profile[i].m == expected_m[i]);
        CHECK(profile[i].n == *oracle::cover_number(quad, quad.all(), quad.all(), profile[i].eps));
        CHECK(profile[i].m == oracle::pack_number(quad, quad.all(), profile[i].eps));
        CHECK(profile[i].m_hat == oracle::min_maximal_pack(quad, quad.all(), profile[i].eps));
    }
}

TEST_CASE("entropy_profile counts are monotone in eps", "[profile][property]") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto space = gen_random_metric({9, seed, GenMode::euclidean, 3});
        const auto profile = entropy_profile(space, space.all());
        for (std::size_t i = 1; i < profile.size(); ++i) {
            CHECK(profile[i].n <= profile[i - 1].n);
            CHECK(profile[i].m <= profile[i - 1].m);
        }
    }
}
