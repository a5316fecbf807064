#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cover_pack.hpp"
#include "products.hpp"

namespace metricpack {

// Outcome of a theorem-verification suite. `witnesses` carries replayable
// counterexamples and is nonempty exactly when the verdict is fail;
// `evidence` carries informational records that accompany a passing verdict
// (e.g. the counterexample demonstrating the expected failure of one side of
// an equivalence).
struct SuiteReport {
    std::string suite;
    Verdict verdict = Verdict::pass;
    std::size_t cases_run = 0;
    std::vector<WitnessRecord> witnesses;
    std::vector<WitnessRecord> evidence;
    std::string note;
};

struct NonUltraWitness {
    std::size_t a = 0, b = 0, c = 0;
    double eps = 0.0;
    CardinalCount n_count = 0;
    CardinalCount m_count = 0;
};

// For a non-ultrametric space: the lexicographically first triple with
// d(a,b) > max{d(a,c), d(b,c)}, the threshold eps set to that max, and the
// exact covering/packing numbers of {a,b,c} at eps. These always satisfy
// N = 1 and M = 2, which is what separates covering from packing.
inline NonUltraWitness witness_non_ultrametric(const FiniteMetricSpace& space,
                                               const SolverLimits& limits = {}) {
    const auto rep = is_ultrametric(space);
    if (rep.verdict) throw std::domain_error("witness_non_ultrametric: space is ultrametric");
    const auto& w = rep.witnesses.front();
    NonUltraWitness out;
    out.a = w.points[0];
    out.b = w.points[1];
    out.c = w.points[2];
    out.eps = std::max(space.dist(out.a, out.c), space.dist(out.b, out.c));
    const auto triple = SubsetMask::from_indices(space.size(), {out.a, out.b, out.c});
    out.n_count = covering_number(space, triple, triple, out.eps, limits).count;
    out.m_count = packing_number(space, triple, out.eps, limits).count;
    return out;
}

namespace detail {

inline bool lex_less(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

// Nonempty subsets ordered by (size, lexicographic index sequence). When
// 2^n exceeds `budget`, falls back to every subset of size <= small_cap plus
// seeded random draws up to `budget` distinct extras.
inline std::vector<SubsetMask> enumerate_subsets(std::size_t n, std::uint64_t budget,
                                                 std::uint64_t seed, std::size_t small_cap) {
    std::vector<std::vector<std::size_t>> sets;
    const bool exhaustive = n < 63 && (std::uint64_t{1} << n) <= budget;
    if (exhaustive) {
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < n; ++i)
                if ((mask >> i) & 1u) idx.push_back(i);
            sets.push_back(std::move(idx));
        }
    } else {
        std::set<std::vector<std::size_t>> seen;
        std::vector<std::size_t> combo;
        auto emit = [&](auto&& self, std::size_t start, std::size_t remaining) -> void {
            if (!combo.empty()) seen.insert(combo);
            if (remaining == 0) return;
            for (std::size_t i = start; i < n; ++i) {
                combo.push_back(i);
                self(self, i + 1, remaining - 1);
                combo.pop_back();
            }
        };
        emit(emit, 0, std::min(small_cap, n));
        std::mt19937_64 eng(seed);
        std::uint64_t extras = 0;
        std::uint64_t attempts = 0;
        while (extras < budget && attempts < budget * 64) {
            ++attempts;
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < n; i += 64) {
                std::uint64_t w = eng();
                for (std::size_t b = 0; b < 64 && i + b < n; ++b)
                    if ((w >> b) & 1u) idx.push_back(i + b);
            }
            if (idx.empty()) continue;
            if (seen.insert(idx).second) ++extras;
        }
        sets.assign(seen.begin(), seen.end());
    }
    std::sort(sets.begin(), sets.end(), lex_less);
    std::vector<SubsetMask> out;
    out.reserve(sets.size());
    for (const auto& idx : sets) out.push_back(SubsetMask::from_indices(n, idx));
    return out;
}

inline std::vector<double> counts_record(double eps, std::initializer_list<CardinalCount> counts) {
    std::vector<double> values{eps};
    for (auto c : counts) values.push_back(static_cast<double>(c));
    return values;
}

}  // namespace detail

// Ultrametric spaces are exactly those where the packing number, both
// covering numbers and the minimum maximal packing coincide for every subset
// at every threshold. For an ultrametric input the equalities are checked
// over the subset enumeration and the full sweep grid; for a non-ultrametric
// input the separating witness triple is produced and verified.
inline SuiteReport check_entropy_equality(const FiniteMetricSpace& space,
                                          std::uint64_t subset_budget = 1024,
                                          const SolverLimits& limits = {},
                                          const ToleranceConfig& tol = {},
                                          std::uint64_t seed = 0) {
    SuiteReport report;
    report.suite = "entropy-equality";
    const auto ultra = is_ultrametric(space);
    if (!ultra.verdict) {
        const auto w = witness_non_ultrametric(space, limits);
        report.cases_run = 1;
        WitnessRecord rec{"non-ultra-witness",
                          {w.a, w.b, w.c},
                          {w.eps, static_cast<double>(w.n_count), static_cast<double>(w.m_count)}};
        if (w.n_count == 1 && w.m_count == 2) {
            report.verdict = Verdict::pass;
            report.evidence.push_back(std::move(rec));
        } else {
            report.verdict = Verdict::fail;
            report.witnesses.push_back(std::move(rec));
        }
        return report;
    }

    bool hit_limits = false;
    for (const auto& W : detail::enumerate_subsets(space.size(), subset_budget, seed, 3)) {
        for (const auto& rec : entropy_profile(space, W, limits, tol)) {
            ++report.cases_run;
            if (!rec.optimal) hit_limits = true;
            if (!(rec.m == rec.n_ambient && rec.n_ambient == rec.n && rec.n == rec.m_hat)) {
                report.verdict = Verdict::fail;
                report.witnesses.push_back(
                    {"count-mismatch", W.indices(),
                     detail::counts_record(rec.eps, {rec.m, rec.n_ambient, rec.n, rec.m_hat})});
                return report;
            }
        }
    }
    if (hit_limits) {
        report.verdict = Verdict::indeterminate;
        report.note = "solver limits reached; some counts are bounds only";
    }
    return report;
}

namespace detail {

inline std::optional<WitnessRecord> first_dinf_mismatch(const ProductSpace& P,
                                                        const ToleranceConfig& tol) {
    for (std::size_t k1 = 0; k1 < P.size(); ++k1)
        for (std::size_t k2 = k1 + 1; k2 < P.size(); ++k2)
            if (!close_rel(P.d(k1, k2), P.d_inf(k1, k2), tol.rel_tol))
                return WitnessRecord{"d-differs-from-dinf", {k1, k2}, {P.d(k1, k2), P.d_inf(k1, k2)}};
    return std::nullopt;
}

}  // namespace detail

// A partial distance-preserving product metric dominating d_inf is an
// ultrametric exactly when both factors are ultrametric and the metric equals
// d_inf. Both sides of the equivalence are evaluated independently; the
// sub-implication "product ultrametric => factors ultrametric" is asserted on
// its own.
inline SuiteReport check_product_ultrametric_equivalence(const ProductSpace& P,
                                                         const ToleranceConfig& tol = {}) {
    SuiteReport report;
    report.suite = "product-ultrametric-equivalence";
    report.cases_run = 1;

    auto pdp = is_partial_distance_preserving(P, tol);
    auto lower = lower_bound_check(P, tol);
    if (!pdp.verdict || !lower.verdict) {
        report.verdict = Verdict::fail;
        report.note = "precondition-failed: requires a partial distance-preserving metric with d_inf <= d";
        auto& source = !pdp.verdict ? pdp.witnesses : lower.witnesses;
        report.witnesses.insert(report.witnesses.end(), source.begin(), source.end());
        return report;
    }

    const auto left = is_ultrametric(P.product());
    const auto fx = is_ultrametric(P.factor_x());
    const auto fy = is_ultrametric(P.factor_y());
    const auto mismatch = detail::first_dinf_mismatch(P, tol);
    const bool right = fx.verdict && fy.verdict && !mismatch.has_value();

    if (left.verdict && !(fx.verdict && fy.verdict)) {
        report.verdict = Verdict::fail;
        report.note = "ultrametric product with a non-ultrametric factor";
        const auto& bad = !fx.verdict ? fx.witnesses : fy.witnesses;
        report.witnesses.insert(report.witnesses.end(), bad.begin(), bad.end());
        return report;
    }

    if (left.verdict == right) {
        report.verdict = Verdict::pass;
        if (!left.verdict) {
            report.evidence.insert(report.evidence.end(), left.witnesses.begin(),
                                   left.witnesses.end());
            if (mismatch) report.evidence.push_back(*mismatch);
            if (!fx.verdict)
                report.evidence.insert(report.evidence.end(), fx.witnesses.begin(), fx.witnesses.end());
            if (!fy.verdict)
                report.evidence.insert(report.evidence.end(), fy.witnesses.begin(), fy.witnesses.end());
        }
    } else {
        report.verdict = Verdict::fail;
        report.note = left.verdict ? "product ultrametric but d differs from d_inf or a factor is not"
                                   : "factors ultrametric with d = d_inf yet product not ultrametric";
        if (!left.verdict)
            report.witnesses.insert(report.witnesses.end(), left.witnesses.begin(),
                                    left.witnesses.end());
        if (mismatch) report.witnesses.push_back(*mismatch);
    }
    return report;
}

enum class MultiplicativityMode {
    packing,               // M(WxZ) = M(W) M(Z), equivalent to product ultrametricity
    covering,              // N(WxZ) = N(W) N(Z), necessary only
    equality,              // M(WxZ) = N(WxZ), necessary only
    packing_and_equality,  // both of the above packing facts, equivalent to ultrametricity
    covering_with_swap,    // covering multiplicativity under swap symmetry, equivalent
    pdp_iff_upper_bound    // partial distance-preserving <=> d <= d_1, given d_inf <= d
};

inline const char* suite_name(MultiplicativityMode mode) {
    switch (mode) {
        case MultiplicativityMode::packing: return "packing-multiplicativity";
        case MultiplicativityMode::covering: return "covering-multiplicativity";
        case MultiplicativityMode::equality: return "packing-covering-equality";
        case MultiplicativityMode::packing_and_equality: return "packing-and-equality";
        case MultiplicativityMode::covering_with_swap: return "covering-with-swap-symmetry";
        case MultiplicativityMode::pdp_iff_upper_bound: return "pdp-iff-upper-bound";
    }
    return "?";
}

// Enumerates nonempty subset pairs (W, Z) of the factors and every eps in the
// merged sweep grid of W, Z and W x Z, checks the mode's equality case by
// case, and asserts the aggregate against the ultrametricity of the product
// (for the equivalence modes) or the one-sided implication (for the
// necessary-condition modes).
inline SuiteReport check_product_multiplicativity(const ProductSpace& P, MultiplicativityMode mode,
                                                  std::uint64_t subset_budget = 4096,
                                                  const SolverLimits& limits = {},
                                                  const ToleranceConfig& tol = {},
                                                  std::uint64_t seed = 0) {
    SuiteReport report;
    report.suite = suite_name(mode);

    auto lower = lower_bound_check(P, tol);
    if (!lower.verdict) {
        report.verdict = Verdict::fail;
        report.note = "precondition-failed: d_inf <= d does not hold";
        report.witnesses = lower.witnesses;
        return report;
    }

    if (mode == MultiplicativityMode::pdp_iff_upper_bound) {
        auto lhs = is_partial_distance_preserving(P, tol);
        auto rhs = upper_bound_check(P, tol);
        report.cases_run = P.size() * (P.size() - 1) / 2;
        if (lhs.verdict == rhs.verdict) {
            report.verdict = Verdict::pass;
            if (!lhs.verdict) {
                report.evidence.insert(report.evidence.end(), lhs.witnesses.begin(), lhs.witnesses.end());
                report.evidence.insert(report.evidence.end(), rhs.witnesses.begin(), rhs.witnesses.end());
            }
        } else {
            report.verdict = Verdict::fail;
            report.note = "partial distance preservation and d <= d_1 disagree";
            report.witnesses.insert(report.witnesses.end(), lhs.witnesses.begin(), lhs.witnesses.end());
            report.witnesses.insert(report.witnesses.end(), rhs.witnesses.begin(), rhs.witnesses.end());
        }
        return report;
    }

    auto pdp = is_partial_distance_preserving(P, tol);
    if (!pdp.verdict) {
        report.verdict = Verdict::fail;
        report.note = "precondition-failed: metric is not partial distance-preserving";
        report.witnesses = pdp.witnesses;
        return report;
    }
    if (mode == MultiplicativityMode::covering_with_swap) {
        auto swap = swap_symmetry_check(P, tol);
        auto fx = is_ultrametric(P.factor_x());
        auto fy = is_ultrametric(P.factor_y());
        if (!swap.verdict || !fx.verdict || !fy.verdict) {
            report.verdict = Verdict::fail;
            report.note = "precondition-failed: requires swap symmetry and ultrametric factors";
            for (auto* rep : {&swap, &fx, &fy})
                report.witnesses.insert(report.witnesses.end(), rep->witnesses.begin(),
                                        rep->witnesses.end());
            return report;
        }
    }

    const bool product_ultra = is_ultrametric(P.product()).verdict;

    // factor-side counts recur across (W, Z) pairs; cache them
    std::map<std::tuple<int, std::vector<std::size_t>, double>, std::pair<CardinalCount, bool>> cache;
    auto factor_pack = [&](int which, const SubsetMask& S, double eps) {
        auto key = std::make_tuple(which, S.indices(), eps);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        const auto& F = which == 0 ? P.factor_x() : P.factor_y();
        const auto r = packing_number(F, S, eps, limits);
        return cache.emplace(key, std::make_pair(r.count, r.optimal)).first->second;
    };
    auto factor_cover = [&](int which, const SubsetMask& S, double eps) {
        auto key = std::make_tuple(which + 2, S.indices(), eps);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        const auto& F = which == 0 ? P.factor_x() : P.factor_y();
        const auto r = covering_number(F, S, S, eps, limits);
        return cache.emplace(key, std::make_pair(r.count, r.optimal)).first->second;
    };

    const bool exhaustive =
        P.nx() < 32 && P.ny() < 32 &&
        (std::uint64_t{1} << P.nx()) * (std::uint64_t{1} << P.ny()) <= subset_budget;
    const auto subsets_x = detail::enumerate_subsets(
        P.nx(), exhaustive ? subset_budget : std::uint64_t{0}, seed, 2);
    const auto subsets_y = detail::enumerate_subsets(
        P.ny(), exhaustive ? subset_budget : std::uint64_t{0}, seed + 1, 2);
    if (!exhaustive) report.note = "subset enumeration truncated to the small-subset grid";

    std::optional<WitnessRecord> violation;
    bool hit_limits = false;

    auto case_record = [&](const char* kind, const SubsetMask& W, const SubsetMask& Z, double eps,
                           std::initializer_list<CardinalCount> counts) {
        WitnessRecord rec{kind, W.indices(), detail::counts_record(eps, counts)};
        for (std::size_t z : Z.indices()) rec.points.push_back(z);
        rec.values.push_back(static_cast<double>(W.count()));
        rec.values.push_back(static_cast<double>(Z.count()));
        return rec;
    };

    for (const auto& W : subsets_x) {
        if (violation || hit_limits) break;
        for (const auto& Z : subsets_y) {
            if (violation || hit_limits) break;
            SubsetMask WZ(P.size());
            for (std::size_t i : W.indices())
                for (std::size_t j : Z.indices()) WZ.set(P.index(i, j));
            const auto grid = sweep_grid(
                merge_breakpoints({distance_breakpoints(P.factor_x(), W, tol),
                                   distance_breakpoints(P.factor_y(), Z, tol),
                                   distance_breakpoints(P.product(), WZ, tol)},
                                  tol));
            for (double eps : grid) {
                ++report.cases_run;
                switch (mode) {
                    case MultiplicativityMode::packing: {
                        const auto mwz = packing_number(P.product(), WZ, eps, limits);
                        const auto mw = factor_pack(0, W, eps);
                        const auto mz = factor_pack(1, Z, eps);
                        if (!mwz.optimal || !mw.second || !mz.second) { hit_limits = true; break; }
                        if (mwz.count != mw.first * mz.first)
                            violation = case_record("packing-multiplicativity-violation", W, Z, eps,
                                                    {mwz.count, mw.first, mz.first});
                        break;
                    }
                    case MultiplicativityMode::covering:
                    case MultiplicativityMode::covering_with_swap: {
                        const auto nwz = covering_number(P.product(), WZ, WZ, eps, limits);
                        const auto nw = factor_cover(0, W, eps);
                        const auto nz = factor_cover(1, Z, eps);
                        if (!nwz.optimal || !nw.second || !nz.second) { hit_limits = true; break; }
                        if (nwz.count != nw.first * nz.first)
                            violation = case_record("covering-multiplicativity-violation", W, Z, eps,
                                                    {nwz.count, nw.first, nz.first});
                        break;
                    }
                    case MultiplicativityMode::equality: {
                        const auto mwz = packing_number(P.product(), WZ, eps, limits);
                        const auto nwz = covering_number(P.product(), WZ, WZ, eps, limits);
                        if (!mwz.optimal || !nwz.optimal) { hit_limits = true; break; }
                        if (mwz.count != nwz.count)
                            violation = case_record("packing-covering-equality-violation", W, Z, eps,
                                                    {mwz.count, nwz.count});
                        break;
                    }
                    case MultiplicativityMode::packing_and_equality: {
                        const auto mwz = packing_number(P.product(), WZ, eps, limits);
                        const auto nwz = covering_number(P.product(), WZ, WZ, eps, limits);
                        const auto mw = factor_pack(0, W, eps);
                        const auto mz = factor_pack(1, Z, eps);
                        if (!mwz.optimal || !nwz.optimal || !mw.second || !mz.second) {
                            hit_limits = true;
                            break;
                        }
                        if (nwz.count != mwz.count)
                            violation = case_record("packing-covering-equality-violation", W, Z, eps,
                                                    {nwz.count, mwz.count});
                        else if (mwz.count != mw.first * mz.first)
                            violation = case_record("packing-multiplicativity-violation", W, Z, eps,
                                                    {mwz.count, mw.first, mz.first});
                        break;
                    }
                    default: break;
                }
                if (violation || hit_limits) break;
            }
        }
    }

    if (hit_limits) {
        report.verdict = Verdict::indeterminate;
        report.note = "solver limits reached; some counts are bounds only";
        return report;
    }

    const bool aggregate = !violation.has_value();
    const bool equivalence_mode = mode == MultiplicativityMode::packing ||
                                  mode == MultiplicativityMode::packing_and_equality ||
                                  mode == MultiplicativityMode::covering_with_swap;
    const bool ok = equivalence_mode ? (aggregate == product_ultra) : (!product_ultra || aggregate);

    if (ok) {
        report.verdict = Verdict::pass;
        if (violation) report.evidence.push_back(std::move(*violation));
    } else {
        report.verdict = Verdict::fail;
        if (violation) {
            report.witnesses.push_back(std::move(*violation));
            report.note = "equality fails although the product is ultrametric";
        } else {
            auto ultra = is_ultrametric(P.product());
            report.witnesses.insert(report.witnesses.end(), ultra.witnesses.begin(),
                                    ultra.witnesses.end());
            report.note = "every case holds yet the product is not ultrametric";
        }
    }
    return report;
}

// Sweep of the classical two-sided bound over an enumerated family of subsets
// and the full grid of each.
inline SuiteReport check_chain_classical_sweep(const FiniteMetricSpace& space,
                                               std::uint64_t subset_budget = 64,
                                               const SolverLimits& limits = {},
                                               const ToleranceConfig& tol = {},
                                               std::uint64_t seed = 0) {
    SuiteReport report;
    report.suite = "chain-classical";
    for (const auto& W : detail::enumerate_subsets(space.size(), subset_budget, seed, 3)) {
        for (double eps : sweep_grid(distance_breakpoints(space, W, tol))) {
            ++report.cases_run;
            const auto rep = chain_classical(space, W, eps, limits);
            if (rep.verdict == Verdict::indeterminate) {
                report.verdict = Verdict::indeterminate;
                report.note = "solver limits reached";
                return report;
            }
            if (rep.verdict == Verdict::fail) {
                report.verdict = Verdict::fail;
                report.witnesses.push_back(
                    {"chain-violation", W.indices(),
                     detail::counts_record(eps, {rep.m_2eps.count, rep.n_eps.count, rep.m_eps.count})});
                return report;
            }
        }
    }
    return report;
}

// Sweep of the refined five-term chain with the whole space as ambient set.
inline SuiteReport check_chain_refined_sweep(const FiniteMetricSpace& space,
                                             std::uint64_t subset_budget = 64,
                                             const SolverLimits& limits = {},
                                             const ToleranceConfig& tol = {},
                                             std::uint64_t seed = 0) {
    SuiteReport report;
    report.suite = "chain-refined";
    const auto ambient = space.all();
    const auto t0 = betweenness_exponent(space, tol);
    for (const auto& W : detail::enumerate_subsets(space.size(), subset_budget, seed, 3)) {
        for (double eps : sweep_grid(distance_breakpoints(space, W, tol))) {
            ++report.cases_run;
            const auto rep = chain_refined_with_t0(space, W, eps, ambient, t0, limits);
            if (rep.verdict == Verdict::indeterminate) {
                report.verdict = Verdict::indeterminate;
                report.note = "solver limits reached";
                return report;
            }
            if (rep.verdict == Verdict::fail) {
                report.verdict = Verdict::fail;
                report.witnesses.push_back(
                    {"chain-violation", W.indices(),
                     detail::counts_record(eps, {rep.m_scaled.count, rep.n_ambient.count,
                                                 rep.n_hat.count, rep.m_hat.count, rep.m_star.count})});
                return report;
            }
        }
    }
    return report;
}

}  // namespace metricpack
