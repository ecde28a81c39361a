#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <vector>

#include "coalesce/chain.hpp"
#include "coalesce/error.hpp"
#include "coalesce/graph.hpp"
#include "coalesce/product.hpp"

namespace coalesce {

/// Expected first-collision times for k simultaneous walks, solved exactly on
/// the product chain with the collision set absorbing.
struct MeetingSolve {
    int k = 0;
    int n = 0;
    Eigen::VectorXd expected;       // per product state; 0 on collision tuples
    double worst = 0.0;             // max over start tuples
    std::vector<int> worst_tuple;

    double at(const std::vector<int>& starts) const {
        long long index = 0;
        for (int v : starts) index = index * n + v;
        return expected[index];
    }
};

inline MeetingSolve meeting_times(const Graph& g, int k, bool lazy,
                                  long long state_cap = 100000) {
    const ProductChain pc = build_product(g, k, lazy, state_cap);
    const CollapsedChain cc = collapse_diagonal(pc);
    const GammaHitting gh = hit_gamma(cc);
    MeetingSolve ms;
    ms.k = k;
    ms.n = pc.n;
    ms.expected = Eigen::VectorXd::Zero(pc.size());
    for (std::size_t i = 0; i < cc.orig_index.size(); ++i) {
        const long long s = cc.orig_index[i];
        ms.expected[s] = gh.expected[static_cast<int>(i)];
        if (ms.expected[s] > ms.worst) {
            ms.worst = ms.expected[s];
            ms.worst_tuple = pc.decode(s);
        }
    }
    return ms;
}

/// Expected time for the walks started at `starts` to first share a vertex.
/// Coinciding starts meet at time zero.
inline double exact_meeting_time(const Graph& g, const std::vector<int>& starts,
                                 bool lazy, long long state_cap = 100000) {
    if (starts.size() < 2) throw ParamError("meeting needs at least two walks");
    for (int v : starts)
        if (v < 0 || v >= g.vertex_count()) throw ParamError("start vertex out of range");
    for (std::size_t i = 0; i < starts.size(); ++i)
        for (std::size_t j = i + 1; j < starts.size(); ++j)
            if (starts[i] == starts[j]) return 0.0;
    return meeting_times(g, static_cast<int>(starts.size()), lazy, state_cap).at(starts);
}

namespace detail {

/// Enumerate simultaneous moves of every occupied vertex, accumulating the
/// probability of each resulting occupied set.
inline void occupied_moves(const Graph& g, bool lazy, const std::vector<int>& occ,
                           std::size_t i, std::uint32_t next_mask, double prob,
                           std::vector<double>& row) {
    if (i == occ.size()) {
        row[next_mask] += prob;
        return;
    }
    const int v = occ[i];
    const double d = g.degree(v);
    if (lazy)
        occupied_moves(g, lazy, occ, i + 1, next_mask | (1U << v), prob * 0.5, row);
    const double step = lazy ? prob / (2.0 * d) : prob / d;
    for (int w : g.neighbors(v))
        occupied_moves(g, lazy, occ, i + 1, next_mask | (1U << w), step, row);
}

/// Masks from which a mask in `targets` is reachable, given forward adjacency.
inline std::vector<bool> reaches(const std::vector<std::vector<std::uint32_t>>& succ,
                                 const std::vector<bool>& targets) {
    const std::size_t count = succ.size();
    std::vector<std::vector<std::uint32_t>> pred(count);
    for (std::uint32_t s = 0; s < count; ++s)
        for (std::uint32_t t : succ[s]) pred[t].push_back(s);
    std::vector<bool> seen(count, false);
    std::queue<std::uint32_t> frontier;
    for (std::uint32_t s = 0; s < count; ++s)
        if (targets[s]) {
            seen[s] = true;
            frontier.push(s);
        }
    while (!frontier.empty()) {
        const std::uint32_t s = frontier.front();
        frontier.pop();
        for (std::uint32_t p : pred[s])
            if (!seen[p]) {
                seen[p] = true;
                frontier.push(p);
            }
    }
    return seen;
}

}  // namespace detail

/// Coalescing particles tracked as the set of occupied vertices: all particles
/// step at once and particles meeting at a vertex merge. Absorbing states are
/// the singletons. States whose absorption can fail (simultaneous simple walks
/// on a bipartite graph can hold two particles on opposite sides forever) get
/// absorbs=false and a NaN time.
struct OccupiedAbsorption {
    int n = 0;
    std::vector<double> expected;  // indexed by occupied-set mask; 0 for singletons
    std::vector<bool> absorbs;     // absorption happens almost surely

    double from_full() const { return expected[(1U << n) - 1]; }
};

inline OccupiedAbsorption occupied_absorption(const Graph& g, bool lazy) {
    const int n = g.vertex_count();
    if (n > 6)
        throw StateCapError("occupied-set solve enumerates all subsets; max 6 vertices");
    const std::uint32_t masks = 1U << n;
    std::vector<std::vector<double>> rows(masks);
    std::vector<std::vector<std::uint32_t>> succ(masks);
    std::vector<bool> singleton(masks, false);
    for (std::uint32_t mask = 1; mask < masks; ++mask) {
        if ((mask & (mask - 1)) == 0) {
            singleton[mask] = true;
            continue;
        }
        std::vector<int> occ;
        for (int v = 0; v < n; ++v)
            if (mask & (1U << v)) occ.push_back(v);
        rows[mask].assign(masks, 0.0);
        detail::occupied_moves(g, lazy, occ, 0, 0, 1.0, rows[mask]);
        for (std::uint32_t t = 1; t < masks; ++t)
            if (rows[mask][t] > 0.0) succ[mask].push_back(t);
    }
    const std::vector<bool> can_absorb = detail::reaches(succ, singleton);
    // A state absorbs almost surely iff nothing reachable from it is stuck.
    std::vector<bool> stuck(masks, false);
    for (std::uint32_t mask = 1; mask < masks; ++mask)
        if (!can_absorb[mask]) stuck[mask] = true;
    const std::vector<bool> tainted = detail::reaches(succ, stuck);

    OccupiedAbsorption oa;
    oa.n = n;
    oa.expected.assign(masks, std::numeric_limits<double>::quiet_NaN());
    oa.absorbs.assign(masks, false);
    std::vector<int> solve_index(masks, -1);
    std::vector<std::uint32_t> solve_states;
    for (std::uint32_t mask = 1; mask < masks; ++mask) {
        if (singleton[mask]) {
            oa.expected[mask] = 0.0;
            oa.absorbs[mask] = true;
        } else if (!tainted[mask]) {
            solve_index[mask] = static_cast<int>(solve_states.size());
            solve_states.push_back(mask);
        }
    }
    if (!solve_states.empty()) {
        const int count = static_cast<int>(solve_states.size());
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(count, count);
        for (int i = 0; i < count; ++i) {
            const std::uint32_t mask = solve_states[i];
            a(i, i) += 1.0;
            for (std::uint32_t t : succ[mask]) {
                if (solve_index[t] >= 0) a(i, solve_index[t]) -= rows[mask][t];
            }
        }
        const Eigen::VectorXd h = a.partialPivLu().solve(Eigen::VectorXd::Ones(count));
        if (!h.allFinite()) throw ChainError("occupied-set solve failed");
        for (int i = 0; i < count; ++i) {
            oa.expected[solve_states[i]] = h[i];
            oa.absorbs[solve_states[i]] = true;
        }
    }
    return oa;
}

/// Expected time for one particle per vertex to coalesce to a single particle.
inline double exact_coalescence_time(const Graph& g, bool lazy) {
    const OccupiedAbsorption oa = occupied_absorption(g, lazy);
    const std::uint32_t full = (1U << oa.n) - 1;
    if (!oa.absorbs[full])
        throw NeverAbsorbsError(
            "full coalescence can fail with simultaneous non-lazy steps on a "
            "bipartite graph; use the lazy walk");
    return oa.from_full();
}

namespace detail {

inline std::vector<int> canonical_partition(const std::vector<int>& raw) {
    std::vector<int> relabel(raw.size(), -1);
    std::vector<int> out(raw.size());
    int next = 0;
    for (std::size_t v = 0; v < raw.size(); ++v) {
        if (relabel[raw[v]] < 0) relabel[raw[v]] = next++;
        out[v] = relabel[raw[v]];
    }
    return out;
}

}  // namespace detail

/// Synchronous opinion dynamics tracked as a partition of the vertices into
/// agreeing groups: every vertex simultaneously adopts the opinion of a random
/// neighbor (lazy: keeps its own with probability 1/2). Absorbing state is the
/// single-group partition.
struct VoterAbsorption {
    std::vector<std::vector<int>> partitions;  // canonical label strings
    Eigen::VectorXd expected;                  // per partition; 0 when all agree
    int start = 0;                             // all-distinct partition
    bool start_absorbs = true;
};

inline VoterAbsorption voter_absorption(const Graph& g, bool lazy) {
    const int n = g.vertex_count();
    if (n > 6)
        throw StateCapError("opinion-partition solve enumerates all source maps; max 6 vertices");

    VoterAbsorption va;
    std::map<std::vector<int>, int> index;
    std::vector<std::vector<int>> partitions;
    std::vector<std::map<int, double>> rows;

    std::vector<int> start(n);
    for (int v = 0; v < n; ++v) start[v] = v;
    index[start] = 0;
    partitions.push_back(start);
    va.start = 0;

    std::queue<int> frontier;
    frontier.push(0);
    rows.emplace_back();
    std::vector<int> picks(n);
    while (!frontier.empty()) {
        const int s = frontier.front();
        frontier.pop();
        const std::vector<int> part = partitions[s];
        bool uniform = true;
        for (int v = 1; v < n; ++v)
            if (part[v] != part[0]) uniform = false;
        if (uniform) {
            rows[s][s] = 1.0;
            continue;
        }
        // Enumerate every joint source choice.
        std::vector<int> at(n, 0);
        while (true) {
            double prob = 1.0;
            std::vector<int> raw(n);
            for (int v = 0; v < n; ++v) {
                const auto& nb = g.neighbors(v);
                const int c = at[v];
                int source;
                if (lazy) {
                    if (c == 0) {
                        source = v;
                        prob *= 0.5;
                    } else {
                        source = nb[c - 1];
                        prob *= 0.5 / nb.size();
                    }
                } else {
                    source = nb[c];
                    prob *= 1.0 / nb.size();
                }
                raw[v] = part[source];
            }
            const std::vector<int> next = detail::canonical_partition(raw);
            auto found = index.find(next);
            int t;
            if (found == index.end()) {
                t = static_cast<int>(partitions.size());
                index[next] = t;
                partitions.push_back(next);
                rows.emplace_back();
                frontier.push(t);
            } else {
                t = found->second;
            }
            rows[s][t] += prob;

            int v = n - 1;
            while (v >= 0) {
                const int limit = lazy ? static_cast<int>(g.neighbors(v).size())
                                       : static_cast<int>(g.neighbors(v).size()) - 1;
                if (at[v] < limit) {
                    ++at[v];
                    break;
                }
                at[v] = 0;
                --v;
            }
            if (v < 0) break;
        }
    }

    const int count = static_cast<int>(partitions.size());
    std::vector<bool> uniform_state(count, false);
    for (int s = 0; s < count; ++s) {
        bool uniform = true;
        for (int v = 1; v < n; ++v)
            if (partitions[s][v] != partitions[s][0]) uniform = false;
        uniform_state[s] = uniform;
    }
    std::vector<std::vector<std::uint32_t>> succ(count);
    for (int s = 0; s < count; ++s)
        for (const auto& [t, p] : rows[s])
            if (p > 0.0) succ[s].push_back(static_cast<std::uint32_t>(t));
    const std::vector<bool> can_absorb = detail::reaches(succ, uniform_state);
    std::vector<bool> stuck(count, false);
    for (int s = 0; s < count; ++s)
        if (!can_absorb[s]) stuck[s] = true;
    const std::vector<bool> tainted = detail::reaches(succ, stuck);

    va.partitions = partitions;
    va.expected = Eigen::VectorXd::Constant(count, std::numeric_limits<double>::quiet_NaN());
    std::vector<int> solve_index(count, -1);
    std::vector<int> solve_states;
    for (int s = 0; s < count; ++s) {
        if (uniform_state[s])
            va.expected[s] = 0.0;
        else if (!tainted[s])
            solve_index[s] = static_cast<int>(solve_states.size()), solve_states.push_back(s);
    }
    if (!solve_states.empty()) {
        const int m = static_cast<int>(solve_states.size());
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            a(i, i) += 1.0;
            for (const auto& [t, p] : rows[solve_states[i]])
                if (solve_index[t] >= 0) a(i, solve_index[t]) -= p;
        }
        const Eigen::VectorXd h = a.partialPivLu().solve(Eigen::VectorXd::Ones(m));
        if (!h.allFinite()) throw ChainError("opinion-partition solve failed");
        for (int i = 0; i < m; ++i) va.expected[solve_states[i]] = h[i];
    }
    va.start_absorbs = !std::isnan(va.expected[va.start]);
    return va;
}

/// Expected time for synchronous opinion dynamics to reach consensus from
/// all-distinct opinions.
inline double exact_voter_time(const Graph& g, bool lazy) {
    const VoterAbsorption va = voter_absorption(g, lazy);
    if (!va.start_absorbs)
        throw NeverAbsorbsError(
            "consensus can fail with simultaneous non-lazy updates on a "
            "bipartite graph; use the lazy walk");
    return va.expected[va.start];
}

/// Pr(a walk from `start` has not visited `target` during steps 1..t), for
/// t = 0..t_max, via the substochastic restriction of the walk matrix.
inline std::vector<double> survival_curve(const Graph& g, bool lazy, int target,
                                          int start, int t_max) {
    const int n = g.vertex_count();
    if (target < 0 || target >= n || start < 0 || start >= n)
        throw ParamError("vertex out of range");
    if (start == target) throw ParamError("survival start must differ from target");
    const Chain c = walk_chain(g, lazy);
    Eigen::MatrixXd q(n - 1, n - 1);
    std::vector<int> states;
    for (int v = 0; v < n; ++v)
        if (v != target) states.push_back(v);
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j) q(i, j) = c.P(states[i], states[j]);
    int start_row = 0;
    for (int i = 0; i < n - 1; ++i)
        if (states[i] == start) start_row = i;
    std::vector<double> curve{1.0};
    Eigen::VectorXd w = Eigen::VectorXd::Ones(n - 1);
    for (int t = 1; t <= t_max; ++t) {
        w = (q * w).eval();
        curve.push_back(w[start_row]);
    }
    return curve;
}

/// Pr(a walk from `start` avoids `target` through step t). Starting on the
/// target counts as an immediate visit.
inline double survival_probability(const Graph& g, bool lazy, int target, int start,
                                   long long t) {
    if (target < 0 || target >= g.vertex_count() || start < 0 ||
        start >= g.vertex_count())
        throw ParamError("vertex out of range");
    if (t < 0) throw ParamError("survival horizon must be nonnegative");
    if (start == target) return 0.0;
    if (t > 1000000)
        throw ParamError("survival horizon above 10^6 steps; the dense recursion would crawl");
    const auto curve = survival_curve(g, lazy, target, start, static_cast<int>(t));
    return curve[static_cast<std::size_t>(t)];
}

/// Worst-case survival over all starts, per step.
inline std::vector<double> survival_max_curve(const Graph& g, bool lazy, int target,
                                              int t_max) {
    const int n = g.vertex_count();
    if (target < 0 || target >= n) throw ParamError("vertex out of range");
    const Chain c = walk_chain(g, lazy);
    Eigen::MatrixXd q(n - 1, n - 1);
    std::vector<int> states;
    for (int v = 0; v < n; ++v)
        if (v != target) states.push_back(v);
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j) q(i, j) = c.P(states[i], states[j]);
    std::vector<double> curve{1.0};
    Eigen::VectorXd w = Eigen::VectorXd::Ones(n - 1);
    for (int t = 1; t <= t_max; ++t) {
        w = (q * w).eval();
        curve.push_back(w.maxCoeff());
    }
    return curve;
}

}  // namespace coalesce
