#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "betweenness.hpp"
#include "space.hpp"

namespace metricpack {

using CardinalCount = std::size_t;

struct SolverLimits {
    std::uint64_t max_nodes = 10'000'000;
    std::chrono::milliseconds time_budget = std::chrono::seconds(30);
};

// Witness-carrying solver results. `optimal` is true when the search proved
// optimality; otherwise the count is the best incumbent (an upper bound for
// covers, a lower bound for packings).
struct CoverResult {
    CardinalCount count = 0;
    SubsetMask centers;
    bool optimal = true;
    std::uint64_t nodes_explored = 0;
};

struct PackResult {
    CardinalCount count = 0;
    SubsetMask points;
    bool optimal = true;
    std::uint64_t nodes_explored = 0;
};

class UncoverableError : public std::domain_error {
public:
    UncoverableError(std::size_t orphan, double eps)
        : std::domain_error("covering_number: point " + std::to_string(orphan) +
                            " is farther than " + std::to_string(eps) + " from every center"),
          orphan_(orphan) {}

    std::size_t orphan() const { return orphan_; }

private:
    std::size_t orphan_;
};

namespace detail {

using Bits = std::vector<std::uint64_t>;

inline Bits make_bits(std::size_t n) { return Bits((n + 63) / 64, 0); }

inline Bits full_bits(std::size_t n) {
    Bits b((n + 63) / 64, ~std::uint64_t{0});
    if (n == 0) return Bits{};
    const std::size_t tail = n & 63;
    if (tail != 0) b.back() = (std::uint64_t{1} << tail) - 1;
    return b;
}

inline void bit_set(Bits& b, std::size_t i) { b[i >> 6] |= std::uint64_t{1} << (i & 63); }
inline bool bit_test(const Bits& b, std::size_t i) { return (b[i >> 6] >> (i & 63)) & 1u; }
inline void bit_reset(Bits& b, std::size_t i) { b[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

inline std::size_t bits_count(const Bits& b) {
    std::size_t c = 0;
    for (auto w : b) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

inline bool bits_empty(const Bits& b) {
    for (auto w : b)
        if (w != 0) return false;
    return true;
}

inline int bits_first(const Bits& b) {
    for (std::size_t wi = 0; wi < b.size(); ++wi)
        if (b[wi] != 0) return static_cast<int>((wi << 6) + std::countr_zero(b[wi]));
    return -1;
}

inline void bits_or(Bits& a, const Bits& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] |= b[i];
}

inline void bits_and(Bits& a, const Bits& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] &= b[i];
}

inline void bits_andnot(Bits& a, const Bits& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] &= ~b[i];
}

inline bool bits_subset(const Bits& a, const Bits& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if ((a[i] & ~b[i]) != 0) return false;
    return true;
}

template <typename Fn>
inline void bits_for_each(const Bits& b, Fn&& fn) {
    for (std::size_t wi = 0; wi < b.size(); ++wi) {
        std::uint64_t w = b[wi];
        while (w != 0) {
            fn((wi << 6) + static_cast<std::size_t>(std::countr_zero(w)));
            w &= w - 1;
        }
    }
}

// shared node/time accounting for the branch-and-bound searches
struct SearchBudget {
    explicit SearchBudget(const SolverLimits& limits)
        : max_nodes(limits.max_nodes), deadline(std::chrono::steady_clock::now() + limits.time_budget) {}

    bool tick() {
        ++nodes;
        if (nodes > max_nodes) return aborted = true;
        if ((nodes & 1023u) == 0 && std::chrono::steady_clock::now() > deadline) return aborted = true;
        return false;
    }

    std::uint64_t max_nodes;
    std::chrono::steady_clock::time_point deadline;
    std::uint64_t nodes = 0;
    bool aborted = false;
};

// Exact minimum set cover by branch and bound: greedy incumbent, dominated-row
// elimination, unit (forced-row) propagation, and branching on the uncovered
// element with the fewest remaining candidate rows.
struct SetCoverSolver {
    std::size_t m;                 // universe size
    std::vector<Bits> rows;        // coverage of each candidate row
    SearchBudget budget;
    Bits full;
    std::size_t max_row_size = 1;
    std::vector<int> best;
    std::vector<int> chosen;

    SetCoverSolver(std::size_t universe, std::vector<Bits> candidate_rows, const SolverLimits& limits)
        : m(universe), rows(std::move(candidate_rows)), budget(limits), full(full_bits(universe)) {
        for (const auto& r : rows) max_row_size = std::max(max_row_size, bits_count(r));
    }

    void greedy_incumbent() {
        Bits covered = make_bits(m);
        std::vector<int> pick;
        while (!bits_subset(full, covered)) {
            int best_row = -1;
            std::size_t best_gain = 0;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                Bits gain = rows[r];
                bits_andnot(gain, covered);
                const std::size_t g = bits_count(gain);
                if (g > best_gain) {
                    best_gain = g;
                    best_row = static_cast<int>(r);
                }
            }
            pick.push_back(best_row);
            bits_or(covered, rows[static_cast<std::size_t>(best_row)]);
        }
        best = pick;
    }

    void search(Bits covered, Bits excluded) {
        if (budget.tick()) return;
        std::size_t pushed = 0;

        // forced-row propagation: an uncovered element with a single remaining
        // candidate row fixes that row; zero candidates kills the branch
        int branch_elem = -1;
        for (;;) {
            branch_elem = -1;
            std::size_t branch_cands = std::numeric_limits<std::size_t>::max();
            int forced_row = -1;
            bool dead = false;
            Bits uncovered = full;
            bits_andnot(uncovered, covered);
            bits_for_each(uncovered, [&](std::size_t e) {
                if (dead || forced_row >= 0) return;
                std::size_t cands = 0;
                int last = -1;
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    if (bit_test(excluded, r) || !bit_test(rows[r], e)) continue;
                    ++cands;
                    last = static_cast<int>(r);
                    if (cands >= branch_cands && cands > 1) break;
                }
                if (cands == 0) {
                    dead = true;
                } else if (cands == 1) {
                    forced_row = last;
                } else if (cands < branch_cands) {
                    branch_cands = cands;
                    branch_elem = static_cast<int>(e);
                }
            });
            if (dead) {
                while (pushed--) chosen.pop_back();
                return;
            }
            if (forced_row >= 0) {
                chosen.push_back(forced_row);
                ++pushed;
                bits_or(covered, rows[static_cast<std::size_t>(forced_row)]);
                bit_set(excluded, static_cast<std::size_t>(forced_row));
                if (chosen.size() >= best.size()) {  // cannot improve
                    while (pushed--) chosen.pop_back();
                    return;
                }
                continue;
            }
            break;
        }

        if (branch_elem < 0) {  // everything covered
            if (chosen.size() < best.size()) best = chosen;
            while (pushed--) chosen.pop_back();
            return;
        }

        const std::size_t uncov =
            m - bits_count(covered);
        const std::size_t lower = (uncov + max_row_size - 1) / max_row_size;
        if (chosen.size() + lower >= best.size()) {
            while (pushed--) chosen.pop_back();
            return;
        }

        for (std::size_t r = 0; r < rows.size() && !budget.aborted; ++r) {
            if (bit_test(excluded, r) || !bit_test(rows[r], static_cast<std::size_t>(branch_elem)))
                continue;
            Bits covered2 = covered;
            bits_or(covered2, rows[r]);
            Bits excluded2 = excluded;
            bit_set(excluded2, r);
            chosen.push_back(static_cast<int>(r));
            search(std::move(covered2), std::move(excluded2));
            chosen.pop_back();
            bit_set(excluded, r);  // covers using r were fully explored above
        }
        while (pushed--) chosen.pop_back();
    }
};

// Exact maximum clique with a greedy-coloring bound; used on the complement
// of the conflict graph, where cliques are exactly the distinguishable sets.
struct MaxCliqueSolver {
    std::size_t m;
    std::vector<Bits> comp;  // adjacency of the complement graph
    SearchBudget budget;
    std::vector<int> best;
    std::vector<int> current;

    MaxCliqueSolver(std::size_t n, std::vector<Bits> complement, const SolverLimits& limits)
        : m(n), comp(std::move(complement)), budget(limits) {}

    void greedy_incumbent() {
        for (std::size_t v = 0; v < m; ++v) {
            bool ok = true;
            for (int u : best)
                if (!bit_test(comp[static_cast<std::size_t>(u)], v)) {
                    ok = false;
                    break;
                }
            if (ok) best.push_back(static_cast<int>(v));
        }
    }

    void expand(Bits candidates) {
        if (budget.tick()) return;
        if (bits_empty(candidates)) {
            if (current.size() > best.size()) best = current;
            return;
        }
        // greedy coloring of the candidate set; color number bounds any clique
        std::vector<std::size_t> order;
        std::vector<std::size_t> color;
        Bits uncolored = candidates;
        std::size_t c = 0;
        while (!bits_empty(uncolored)) {
            ++c;
            Bits avail = uncolored;
            while (!bits_empty(avail)) {
                const auto v = static_cast<std::size_t>(bits_first(avail));
                bit_reset(avail, v);
                bit_reset(uncolored, v);
                bits_andnot(avail, comp[v]);
                order.push_back(v);
                color.push_back(c);
            }
        }
        for (std::size_t i = order.size(); i-- > 0 && !budget.aborted;) {
            if (current.size() + color[i] <= best.size()) return;
            const std::size_t v = order[i];
            Bits next = candidates;
            bits_and(next, comp[v]);
            current.push_back(static_cast<int>(v));
            expand(std::move(next));
            current.pop_back();
            bit_reset(candidates, v);
        }
    }
};

// Exact minimum independent dominating set (equivalently, smallest maximal
// independent set). Branches on the lowest undominated vertex over every
// selectable member of its closed neighbourhood.
struct MinIdsSolver {
    std::size_t m;
    std::vector<Bits> adj;     // conflict adjacency (open)
    std::vector<Bits> closed;  // adj | self
    SearchBudget budget;
    Bits full;
    std::size_t max_cover = 1;
    std::vector<int> best;
    std::vector<int> chosen;

    MinIdsSolver(std::size_t n, std::vector<Bits> adjacency, const SolverLimits& limits)
        : m(n), adj(std::move(adjacency)), budget(limits), full(full_bits(n)) {
        closed = adj;
        for (std::size_t v = 0; v < m; ++v) {
            bit_set(closed[v], v);
            max_cover = std::max(max_cover, bits_count(closed[v]));
        }
    }

    void greedy_incumbent() {
        Bits dominated = make_bits(m);
        for (std::size_t v = 0; v < m; ++v) {
            if (bit_test(dominated, v)) continue;
            bool independent = true;
            for (int u : best)
                if (bit_test(adj[static_cast<std::size_t>(u)], v)) {
                    independent = false;
                    break;
                }
            if (independent) {
                best.push_back(static_cast<int>(v));
                bits_or(dominated, closed[v]);
            }
        }
    }

    void search(Bits dominated, Bits banned) {
        if (budget.tick()) return;
        if (bits_subset(full, dominated)) {
            if (chosen.size() < best.size()) best = chosen;
            return;
        }
        const std::size_t undominated = m - bits_count(dominated);
        const std::size_t lower = (undominated + max_cover - 1) / max_cover;
        if (chosen.size() + lower >= best.size()) return;

        Bits und = full;
        bits_andnot(und, dominated);
        const auto v = static_cast<std::size_t>(bits_first(und));
        Bits options = closed[v];
        bits_andnot(options, banned);
        std::vector<std::size_t> opts;
        bits_for_each(options, [&](std::size_t u) { opts.push_back(u); });
        for (std::size_t u : opts) {
            if (budget.aborted) return;
            Bits dominated2 = dominated;
            bits_or(dominated2, closed[u]);
            Bits banned2 = banned;
            bits_or(banned2, closed[u]);  // u itself and its neighbours become unselectable
            chosen.push_back(static_cast<int>(u));
            search(std::move(dominated2), std::move(banned2));
            chosen.pop_back();
            bit_set(banned, u);  // dominating sets through u were fully explored
        }
    }
};

inline SubsetMask positions_to_mask(std::size_t universe, const std::vector<std::size_t>& global,
                                    const std::vector<int>& positions) {
    SubsetMask mask(universe);
    for (int p : positions) mask.set(global[static_cast<std::size_t>(p)]);
    return mask;
}

}  // namespace detail

// Smallest number of closed eps-balls centered in A that cover W (exact
// minimum set cover). Throws UncoverableError when some point of W is beyond
// eps of every candidate center.
inline CoverResult covering_number(const FiniteMetricSpace& space, const SubsetMask& W,
                                   const SubsetMask& A, double eps,
                                   const SolverLimits& limits = {}) {
    detail::require_mask(space, W);
    detail::require_mask(space, A);
    detail::require_nonempty(W, "covering_number");
    if (!(eps > 0.0)) throw std::domain_error("covering_number: eps must be positive");

    const auto wl = W.indices();
    const auto al = A.indices();
    const std::size_t m = wl.size();

    std::vector<detail::Bits> rows;
    std::vector<std::size_t> row_center;
    rows.reserve(al.size());
    for (std::size_t a : al) {
        detail::Bits row = detail::make_bits(m);
        bool any = false;
        for (std::size_t p = 0; p < m; ++p) {
            if (space.dist(wl[p], a) <= eps) {
                detail::bit_set(row, p);
                any = true;
            }
        }
        if (any) {
            rows.push_back(std::move(row));
            row_center.push_back(a);
        }
    }

    detail::Bits covered_union = detail::make_bits(m);
    for (const auto& r : rows) detail::bits_or(covered_union, r);
    for (std::size_t p = 0; p < m; ++p)
        if (!detail::bit_test(covered_union, p)) throw UncoverableError(wl[p], eps);

    // drop rows contained in another row; on ties keep the smaller center
    std::vector<bool> alive(rows.size(), true);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!alive[i]) continue;
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (i == j || !alive[j]) continue;
            if (detail::bits_subset(rows[i], rows[j]) &&
                (rows[i] != rows[j] || row_center[j] < row_center[i])) {
                alive[i] = false;
                break;
            }
        }
    }
    std::vector<detail::Bits> kept;
    std::vector<std::size_t> kept_center;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (alive[i]) {
            kept.push_back(rows[i]);
            kept_center.push_back(row_center[i]);
        }
    }

    detail::SetCoverSolver solver(m, std::move(kept), limits);
    solver.greedy_incumbent();
    solver.search(detail::make_bits(m), detail::make_bits(solver.rows.size()));

    CoverResult result;
    result.count = solver.best.size();
    result.centers = SubsetMask(space.size());
    for (int r : solver.best) result.centers.set(kept_center[static_cast<std::size_t>(r)]);
    result.optimal = !solver.budget.aborted;
    result.nodes_explored = solver.budget.nodes;
    return result;
}

namespace detail {

inline std::vector<Bits> conflict_adjacency(const FiniteMetricSpace& space,
                                            const std::vector<std::size_t>& wl, double eps) {
    const std::size_t m = wl.size();
    std::vector<Bits> adj(m, make_bits(m));
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = p + 1; q < m; ++q)
            if (space.dist(wl[p], wl[q]) <= eps) {
                bit_set(adj[p], q);
                bit_set(adj[q], p);
            }
    return adj;
}

}  // namespace detail

// Largest eps-distinguishable subset of W, i.e. a maximum independent set of
// the threshold graph with edges at distance <= eps.
inline PackResult packing_number(const FiniteMetricSpace& space, const SubsetMask& W, double eps,
                                 const SolverLimits& limits = {}) {
    detail::require_mask(space, W);
    detail::require_nonempty(W, "packing_number");
    if (!(eps > 0.0)) throw std::domain_error("packing_number: eps must be positive");

    const auto wl = W.indices();
    const std::size_t m = wl.size();
    auto adj = detail::conflict_adjacency(space, wl, eps);
    std::vector<detail::Bits> comp(m);
    const auto full = detail::full_bits(m);
    for (std::size_t v = 0; v < m; ++v) {
        comp[v] = full;
        detail::bits_andnot(comp[v], adj[v]);
        detail::bit_reset(comp[v], v);
    }

    detail::MaxCliqueSolver solver(m, std::move(comp), limits);
    solver.greedy_incumbent();
    solver.expand(full);

    PackResult result;
    result.count = solver.best.size();
    result.points = detail::positions_to_mask(space.size(), wl, solver.best);
    result.optimal = !solver.budget.aborted;
    result.nodes_explored = solver.budget.nodes;
    return result;
}

// Smallest inclusion-maximal eps-distinguishable subset of W (the independent
// domination number of the threshold graph).
inline PackResult min_maximal_packing(const FiniteMetricSpace& space, const SubsetMask& W,
                                      double eps, const SolverLimits& limits = {}) {
    detail::require_mask(space, W);
    detail::require_nonempty(W, "min_maximal_packing");
    if (!(eps > 0.0)) throw std::domain_error("min_maximal_packing: eps must be positive");

    const auto wl = W.indices();
    const std::size_t m = wl.size();
    detail::MinIdsSolver solver(m, detail::conflict_adjacency(space, wl, eps), limits);
    solver.greedy_incumbent();
    solver.search(detail::make_bits(m), detail::make_bits(m));

    PackResult result;
    result.count = solver.best.size();
    result.points = detail::positions_to_mask(space.size(), wl, solver.best);
    result.optimal = !solver.budget.aborted;
    result.nodes_explored = solver.budget.nodes;
    return result;
}

// Classical two-sided bound: M_{2eps}(W) <= N_eps(W) <= M_eps(W).
struct ChainClassicalReport {
    double eps = 0.0;
    PackResult m_2eps;
    CoverResult n_eps;
    PackResult m_eps;
    Verdict verdict = Verdict::indeterminate;
};

inline ChainClassicalReport chain_classical(const FiniteMetricSpace& space, const SubsetMask& W,
                                            double eps, const SolverLimits& limits = {}) {
    ChainClassicalReport r;
    r.eps = eps;
    r.m_2eps = packing_number(space, W, 2.0 * eps, limits);
    r.n_eps = covering_number(space, W, W, eps, limits);
    r.m_eps = packing_number(space, W, eps, limits);
    if (!r.m_2eps.optimal || !r.n_eps.optimal || !r.m_eps.optimal) {
        r.verdict = Verdict::indeterminate;
    } else {
        r.verdict = (r.m_2eps.count <= r.n_eps.count && r.n_eps.count <= r.m_eps.count)
                        ? Verdict::pass
                        : Verdict::fail;
    }
    return r;
}

// Refined five-term chain through the betweenness exponent t0 of the ambient
// subspace:
//   M*_{2^(1/t0) eps}(W) <= N^X_eps(W) <= N_eps(W) <= Mhat_eps(W) <= M*_eps(W)
struct ChainRefinedReport {
    double eps = 0.0;
    ExtendedPositive ambient_t0 = ExtendedPositive::infinite();
    double scale = 1.0;  // 2^(1/t0)
    PackResult m_scaled;
    CoverResult n_ambient;
    CoverResult n_hat;
    PackResult m_hat;
    PackResult m_star;
    Verdict verdict = Verdict::indeterminate;
};

inline ChainRefinedReport chain_refined_with_t0(const FiniteMetricSpace& space, const SubsetMask& W,
                                                double eps, const SubsetMask& ambient,
                                                ExtendedPositive ambient_t0,
                                                const SolverLimits& limits = {}) {
    detail::require_mask(space, ambient);
    detail::require_nonempty(ambient, "chain_refined");
    if (!W.is_subset_of(ambient))
        throw std::invalid_argument("chain_refined: W must be contained in the ambient subset");

    ChainRefinedReport r;
    r.eps = eps;
    r.ambient_t0 = ambient_t0;
    r.scale = ambient_t0.pow2_inv();
    r.m_scaled = packing_number(space, W, r.scale * eps, limits);
    r.n_ambient = covering_number(space, W, ambient, eps, limits);
    r.n_hat = covering_number(space, W, W, eps, limits);
    r.m_hat = min_maximal_packing(space, W, eps, limits);
    r.m_star = packing_number(space, W, eps, limits);
    if (!r.m_scaled.optimal || !r.n_ambient.optimal || !r.n_hat.optimal || !r.m_hat.optimal ||
        !r.m_star.optimal) {
        r.verdict = Verdict::indeterminate;
    } else {
        const bool holds = r.m_scaled.count <= r.n_ambient.count &&
                           r.n_ambient.count <= r.n_hat.count && r.n_hat.count <= r.m_hat.count &&
                           r.m_hat.count <= r.m_star.count;
        r.verdict = holds ? Verdict::pass : Verdict::fail;
    }
    return r;
}

inline ChainRefinedReport chain_refined(const FiniteMetricSpace& space, const SubsetMask& W,
                                        double eps, const SubsetMask& ambient,
                                        const SolverLimits& limits = {},
                                        const ToleranceConfig& tol = {}) {
    detail::require_mask(space, ambient);
    detail::require_nonempty(ambient, "chain_refined");
    const auto t0 = betweenness_exponent(restrict(space, ambient, tol), tol);
    return chain_refined_with_t0(space, W, eps, ambient, t0, limits);
}

// Evaluation grid for the step functions of eps: half the smallest
// breakpoint, every breakpoint, and the midpoint of every gap. A set with no
// positive pairwise distance gets the single probe eps = 1.
inline std::vector<double> sweep_grid(const std::vector<double>& breakpoints) {
    if (breakpoints.empty()) return {1.0};
    std::vector<double> grid;
    grid.reserve(2 * breakpoints.size());
    grid.push_back(breakpoints.front() / 2.0);
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        grid.push_back(breakpoints[i]);
        if (i + 1 < breakpoints.size())
            grid.push_back(0.5 * (breakpoints[i] + breakpoints[i + 1]));
    }
    return grid;
}

inline std::vector<double> merge_breakpoints(std::vector<std::vector<double>> lists,
                                             const ToleranceConfig& tol = {}) {
    std::vector<double> all;
    for (auto& l : lists) all.insert(all.end(), l.begin(), l.end());
    std::sort(all.begin(), all.end());
    std::vector<double> out;
    for (double v : all) {
        if (!(v > 0.0)) continue;
        if (out.empty() || v - out.back() > tol.rel_tol * v) out.push_back(v);
    }
    return out;
}

struct ProfileRecord {
    double eps = 0.0;
    CardinalCount n = 0;          // covering number, centers in W
    CardinalCount m = 0;          // packing number
    CardinalCount m_hat = 0;      // minimum maximal packing
    CardinalCount n_ambient = 0;  // covering number, centers anywhere in the space
    bool optimal = true;
};

// All four counts over the sweep grid of W, sorted by eps ascending.
inline std::vector<ProfileRecord> entropy_profile(const FiniteMetricSpace& space,
                                                  const SubsetMask& W,
                                                  const SolverLimits& limits = {},
                                                  const ToleranceConfig& tol = {}) {
    detail::require_mask(space, W);
    detail::require_nonempty(W, "entropy_profile");
    std::vector<ProfileRecord> records;
    for (double eps : sweep_grid(distance_breakpoints(space, W, tol))) {
        ProfileRecord rec;
        rec.eps = eps;
        const auto n = covering_number(space, W, W, eps, limits);
        const auto m = packing_number(space, W, eps, limits);
        const auto mh = min_maximal_packing(space, W, eps, limits);
        const auto na = covering_number(space, W, space.all(), eps, limits);
        rec.n = n.count;
        rec.m = m.count;
        rec.m_hat = mh.count;
        rec.n_ambient = na.count;
        rec.optimal = n.optimal && m.optimal && mh.optimal && na.optimal;
        records.push_back(rec);
    }
    return records;
}

}  // namespace metricpack
