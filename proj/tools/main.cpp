// Command-line front end: file ingestion, verb dispatch, report emission.
// Exit codes: 0 pass/success, 1 fail/counterexample, 2 indeterminate,
// 3 usage or input error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <metricpack/metricpack.hpp>

using namespace metricpack;

namespace {

struct GlobalOpts {
    double rel_tol = 1e-9;
    double root_tol = 1e-12;
    std::uint64_t limit_nodes = 10'000'000;
    std::uint64_t time_budget = 30;  // seconds
    std::string output = "json";
    std::string points_metric;  // empty: input files hold matrices
    std::string format = "auto";

    ToleranceConfig tol() const { return {rel_tol, root_tol}; }
    SolverLimits limits() const {
        return {limit_nodes, std::chrono::seconds(time_budget)};
    }
    FileFormat file_format() const {
        if (format == "json") return FileFormat::json_matrix;
        if (format == "csv") return FileFormat::csv_matrix;
        return FileFormat::auto_detect;
    }
};

PointMetric point_metric_from(const std::string& name) {
    if (name == "euclidean") return PointMetric::euclidean;
    if (name == "manhattan") return PointMetric::manhattan;
    if (name == "chebyshev") return PointMetric::chebyshev;
    throw ParseError("unknown point metric: " + name);
}

// Space input that also accepts product files (their product matrix is used).
FiniteMetricSpace load_space(const std::string& path, const GlobalOpts& g) {
    if (!g.points_metric.empty())
        return parse_points_file(path, point_metric_from(g.points_metric), g.tol());
    if (looks_like_product_json(path)) return parse_product_file(path, g.tol()).product();
    return parse_space_file(path, g.file_format(), g.tol());
}

SubsetMask subset_or_full(const FiniteMetricSpace& space, const std::string& subset_spec) {
    if (subset_spec.empty()) return space.all();
    return SubsetMask::from_indices(space.size(), parse_index_list(subset_spec));
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int exit_for(Verdict v) {
    switch (v) {
        case Verdict::pass: return 0;
        case Verdict::fail: return 1;
        default: return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact covering, packing and ultrametricity analysis of finite metric spaces"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--tol", g.rel_tol, "relative tolerance (validation, bucketing)");
    app.add_option("--root-tol", g.root_tol, "bisection bracket width for exponents");
    app.add_option("--limit-nodes", g.limit_nodes, "search-node budget per solver call");
    app.add_option("--time-budget", g.time_budget, "solver time budget in seconds");
    app.add_option("--output", g.output, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--points-metric", g.points_metric,
                   "treat inputs as coordinate rows under this metric")
        ->check(CLI::IsMember({"euclidean", "manhattan", "chebyshev"}));
    app.add_option("--format", g.format, "input matrix format")
        ->check(CLI::IsMember({"auto", "json", "csv"}));

    std::string file, file_y, subset_spec, ambient_file, matrix_file, fixture, suite;
    std::string mode = "euclidean", out_file;
    double eps = 0.0, p = std::numeric_limits<double>::infinity(), fix_a = 1.0, gen_t = 1.0;
    bool ambient_full = false, min_maximal = false;
    std::uint64_t budget = 4096, seed = 0, gen_n = 4, gen_dim = 2;

    auto* cmd_validate = app.add_subcommand("validate", "check the metric axioms of a matrix");
    cmd_validate->add_option("file", file)->required();

    auto* cmd_ultra = app.add_subcommand("ultra", "ultrametricity check with witness");
    cmd_ultra->add_option("file", file)->required();
    cmd_ultra->add_option("--subset", subset_spec, "comma-separated point indices");

    auto* cmd_t0 = app.add_subcommand("t0", "betweenness exponent of the space");
    cmd_t0->add_option("file", file)->required();

    auto* cmd_cover = app.add_subcommand("cover", "exact covering number");
    cmd_cover->add_option("file", file)->required();
    cmd_cover->add_option("--eps", eps)->required();
    cmd_cover->add_option("--subset", subset_spec, "the covered set W");
    cmd_cover->add_option("--ambient-file", ambient_file, "file of candidate center indices");
    cmd_cover->add_flag("--ambient-full", ambient_full, "centers anywhere in the space");

    auto* cmd_pack = app.add_subcommand("pack", "exact packing number");
    cmd_pack->add_option("file", file)->required();
    cmd_pack->add_option("--eps", eps)->required();
    cmd_pack->add_option("--subset", subset_spec);
    cmd_pack->add_flag("--min-maximal", min_maximal, "smallest maximal packing instead");

    auto* cmd_profile = app.add_subcommand("profile", "covering/packing profile over the grid");
    cmd_profile->add_option("file", file)->required();
    cmd_profile->add_option("--subset", subset_spec);

    auto* cmd_product = app.add_subcommand("product", "construct a product space");
    cmd_product->add_option("x", file, "first factor");
    cmd_product->add_option("y", file_y, "second factor");
    cmd_product->add_option("--p", p, "p-norm combination exponent (inf by default)");
    cmd_product->add_option("--matrix-file", matrix_file, "explicit product matrix");
    cmd_product->add_option("--fixture", fixture, "built-in fixture")
        ->check(CLI::IsMember({"path-grid", "unit-quad"}));
    cmd_product->add_option("--a", fix_a, "diagonal distance of the unit-quad fixture");

    auto* cmd_check = app.add_subcommand("check", "run a verification suite");
    cmd_check
        ->add_option("suite", suite,
                     "one of thm1.6, thm2.8, thm3.1, lemma3.2, eq1.1, prop3.4, cor3.8, remark3.10")
        ->required()
        ->check(CLI::IsMember(
            {"thm1.6", "thm2.8", "thm3.1", "lemma3.2", "eq1.1", "prop3.4", "cor3.8", "remark3.10"}));
    cmd_check->add_option("file", file)->required();
    cmd_check->add_option("--budget", budget, "subset enumeration budget");
    cmd_check->add_option("--seed", seed, "seed for sampled enumerations");

    auto* cmd_witness = app.add_subcommand("witness", "separating triple of a non-ultrametric space");
    cmd_witness->add_option("file", file)->required();

    auto* cmd_gen = app.add_subcommand("gen", "generate a space");
    cmd_gen->add_option("--mode", mode)
        ->check(CLI::IsMember({"euclidean", "range12", "dendrogram", "two-level"}));
    cmd_gen->add_option("--n", gen_n, "number of points");
    cmd_gen->add_option("--seed", seed);
    cmd_gen->add_option("--dim", gen_dim, "dimension for euclidean mode");
    cmd_gen->add_option("--t", gen_t, "exponent for two-level mode");
    cmd_gen->add_option("-o,--out", out_file, "write to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }

    try {
        g.tol().validate();

        if (*cmd_validate) {
            ValidationReport report;
            if (!g.points_metric.empty()) {
                report =
                    validate_metric(parse_points_file(file, point_metric_from(g.points_metric)).matrix(),
                                    g.tol());
            } else {
                auto [labels, m] = raw_space_from_file(file, g.file_format());
                report = validate_metric(m, g.tol());
            }
            emit(to_json(report));
            return report.ok ? 0 : 1;
        }

        if (*cmd_ultra) {
            const auto space = load_space(file, g);
            const auto rep = is_ultrametric(space, subset_or_full(space, subset_spec));
            emit(to_json(rep));
            return rep.verdict ? 0 : 1;
        }

        if (*cmd_t0) {
            const auto space = load_space(file, g);
            std::cout << to_json(betweenness_exponent(space, g.tol())).dump() << "\n";
            return 0;
        }

        if (*cmd_cover) {
            const auto space = load_space(file, g);
            const auto W = subset_or_full(space, subset_spec);
            SubsetMask A = W;
            if (ambient_full) {
                A = space.all();
            } else if (!ambient_file.empty()) {
                std::ifstream in(ambient_file);
                if (!in) throw ParseError("cannot open ambient file: " + ambient_file);
                std::string text((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
                A = SubsetMask::from_indices(space.size(), parse_index_list(text));
            }
            const auto r = covering_number(space, W, A, eps, g.limits());
            emit(to_json(r));
            return r.optimal ? 0 : 2;
        }

        if (*cmd_pack) {
            const auto space = load_space(file, g);
            const auto W = subset_or_full(space, subset_spec);
            const auto r = min_maximal ? min_maximal_packing(space, W, eps, g.limits())
                                       : packing_number(space, W, eps, g.limits());
            emit(to_json(r));
            return r.optimal ? 0 : 2;
        }

        if (*cmd_profile) {
            const auto space = load_space(file, g);
            const auto records =
                entropy_profile(space, subset_or_full(space, subset_spec), g.limits(), g.tol());
            if (g.output == "csv")
                std::cout << profile_csv(records);
            else
                emit(to_json(records));
            for (const auto& rec : records)
                if (!rec.optimal) return 2;
            return 0;
        }

        if (*cmd_product) {
            std::optional<ProductSpace> P;
            if (!fixture.empty()) {
                P = fixture == "path-grid" ? fixture_path_grid(g.tol())
                                           : fixture_unit_quad(fix_a, g.tol());
            } else {
                if (file.empty() || file_y.empty())
                    throw ParseError("product: two factor files are required without --fixture");
                const auto X = load_space(file, g);
                const auto Y = load_space(file_y, g);
                if (!matrix_file.empty()) {
                    auto [labels, m] = raw_space_from_file(matrix_file, g.file_format());
                    P = product_custom(X, Y, m, g.tol());
                } else {
                    P = product_p(X, Y, p, g.tol());
                }
            }
            emit(to_json(*P));
            return 0;
        }

        if (*cmd_check) {
            SuiteReport report;
            if (suite == "thm1.6") {
                report = check_entropy_equality(load_space(file, g), budget, g.limits(), g.tol(), seed);
            } else if (suite == "eq1.1") {
                report =
                    check_chain_classical_sweep(load_space(file, g), budget, g.limits(), g.tol(), seed);
            } else if (suite == "lemma3.2") {
                report =
                    check_chain_refined_sweep(load_space(file, g), budget, g.limits(), g.tol(), seed);
            } else {
                const auto P = parse_product_file(file, g.tol());
                if (suite == "thm2.8") {
                    report = check_product_ultrametric_equivalence(P, g.tol());
                } else {
                    MultiplicativityMode m = MultiplicativityMode::packing;
                    if (suite == "prop3.4") m = MultiplicativityMode::packing_and_equality;
                    if (suite == "cor3.8") m = MultiplicativityMode::covering_with_swap;
                    if (suite == "remark3.10") m = MultiplicativityMode::pdp_iff_upper_bound;
                    report = check_product_multiplicativity(P, m, budget, g.limits(), g.tol(), seed);
                }
            }
            report.suite = suite;
            emit(to_json(report));
            return exit_for(report.verdict);
        }

        if (*cmd_witness) {
            const auto w = witness_non_ultrametric(load_space(file, g), g.limits());
            emit(to_json(w));
            return 0;
        }

        if (*cmd_gen) {
            FiniteMetricSpace space = [&] {
                if (mode == "dendrogram")
                    return gen_random_ultrametric({gen_n, seed, GenMode::dendrogram}, g.tol());
                if (mode == "two-level") return gen_example_two_level(gen_n, gen_t, g.tol());
                const GenMode gm = mode == "range12" ? GenMode::range12 : GenMode::euclidean;
                return gen_random_metric({gen_n, seed, gm, gen_dim}, g.tol());
            }();
            const auto j = to_json(space);
            if (out_file.empty()) {
                emit(j);
            } else {
                std::ofstream out(out_file);
                if (!out) throw ParseError("cannot open output file: " + out_file);
                out << j.dump(2) << "\n";
            }
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const MetricValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
