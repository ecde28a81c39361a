#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "coalesce/error.hpp"
#include "coalesce/graph.hpp"
#include "coalesce/rng.hpp"

namespace coalesce {

enum class Family { complete, cycle, path, star, dumbbell, random_regular, power_law, erdos_renyi };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::complete: return "complete";
        case Family::cycle: return "cycle";
        case Family::path: return "path";
        case Family::star: return "star";
        case Family::dumbbell: return "dumbbell";
        case Family::random_regular: return "random-regular";
        case Family::power_law: return "power-law";
        case Family::erdos_renyi: return "erdos-renyi";
    }
    return "?";
}

inline std::optional<Family> parse_family(std::string name) {
    std::replace(name.begin(), name.end(), '_', '-');
    for (Family f : {Family::complete, Family::cycle, Family::path, Family::star,
                     Family::dumbbell, Family::random_regular, Family::power_law,
                     Family::erdos_renyi})
        if (name == family_name(f)) return f;
    return std::nullopt;
}

/// Parameters for generate(). `n` is the requested size; the power-law family
/// derives its actual vertex count from its degree sequence and may differ.
struct FamilySpec {
    Family family = Family::complete;
    int n = 0;
    int r = 0;          // random_regular
    double alpha = 0;   // power_law, needs 2 < alpha < 3
    double p = 0;       // erdos_renyi
};

namespace detail {

inline Graph clique_path_dumbbell(int n) {
    // Two cliques of size floor(n/4); the remaining vertices form the
    // connecting path. Layout: [0, c) clique A, [c, 2c) clique B,
    // [2c, n) path, attached to vertex 0 and vertex c.
    if (n < 4) throw ParamError("dumbbell needs n >= 4");
    const int c = n / 4;
    std::vector<Graph::Edge> edges;
    for (int base : {0, c})
        for (int i = 0; i < c; ++i)
            for (int j = i + 1; j < c; ++j) edges.push_back({base + i, base + j});
    const int path_len = n - 2 * c;
    if (path_len == 0) {
        edges.push_back({0, c});
    } else {
        edges.push_back({0, 2 * c});
        for (int i = 2 * c; i + 1 < n; ++i) edges.push_back({i, i + 1});
        edges.push_back({c, n - 1});
    }
    return Graph::from_edges(edges, n);
}

/// One stub pairing over the degree sequence, as a multigraph edge list with
/// endpoints normalized to u <= v. Self-loops and repeats are allowed here;
/// the caller repairs them. Fisher-Yates runs on our own stream so results
/// are platform-independent.
inline std::vector<Graph::Edge> paired_multigraph(const std::vector<int>& degrees,
                                                  RngStream& rng) {
    std::vector<int> stubs;
    for (int v = 0; v < static_cast<int>(degrees.size()); ++v)
        stubs.insert(stubs.end(), degrees[v], v);
    for (int i = static_cast<int>(stubs.size()) - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(stubs[i], stubs[j]);
    }
    std::vector<Graph::Edge> edges;
    edges.reserve(stubs.size() / 2);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
        int u = stubs[i], v = stubs[i + 1];
        if (u > v) std::swap(u, v);
        edges.push_back({u, v});
    }
    return edges;
}

/// Repairs self-loops and repeated edges in place with degree-preserving
/// two-edge swaps: a conflicting edge (a,b) plus a random partner (c,d)
/// become (a,c),(b,d) when both replacements are new simple edges. Skewed
/// degree sequences make wholesale rejection hopeless (the chance that one
/// pairing is already simple vanishes), while local swaps clear the handful
/// of conflicts almost surely. Returns false if the swap budget runs out.
inline bool make_simple(std::vector<Graph::Edge>& edges, RngStream& rng) {
    std::map<Graph::Edge, int> count;
    for (const auto& e : edges) ++count[e];
    const auto is_bad = [&](const Graph::Edge& e) {
        return e.first == e.second || count[e] > 1;
    };
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (is_bad(edges[i])) bad.push_back(i);
    long long budget = 500LL * static_cast<long long>(edges.size()) + 1000;
    while (!bad.empty() && budget-- > 0) {
        const auto pick = static_cast<std::size_t>(rng.below(bad.size()));
        const std::size_t i = bad[pick];
        if (!is_bad(edges[i])) {  // already repaired by an earlier swap
            bad[pick] = bad.back();
            bad.pop_back();
            continue;
        }
        const auto j = static_cast<std::size_t>(rng.below(edges.size()));
        if (j == i) continue;
        const int a = edges[i].first, b = edges[i].second;
        int c = edges[j].first, d = edges[j].second;
        if (rng.coin()) std::swap(c, d);
        if (a == c || b == d) continue;
        const Graph::Edge e1{std::min(a, c), std::max(a, c)};
        const Graph::Edge e2{std::min(b, d), std::max(b, d)};
        if (e1 == e2) continue;
        const auto live = [&](const Graph::Edge& e) {
            int k = 0;
            const auto found = count.find(e);
            if (found != count.end()) k = found->second;
            if (e == edges[i]) --k;
            if (e == edges[j]) --k;
            return k;
        };
        if (live(e1) > 0 || live(e2) > 0) continue;
        if (--count[edges[i]] == 0) count.erase(edges[i]);
        if (--count[edges[j]] == 0) count.erase(edges[j]);
        ++count[e1];
        ++count[e2];
        edges[i] = e1;
        edges[j] = e2;
        bad[pick] = bad.back();
        bad.pop_back();
    }
    for (const auto& e : edges)
        if (is_bad(e)) return false;
    return true;
}

inline Graph configuration_model(const std::vector<int>& degrees, std::uint64_t seed,
                                 int attempts) {
    const int n = static_cast<int>(degrees.size());
    const long long total = std::accumulate(degrees.begin(), degrees.end(), 0LL);
    if (total % 2 != 0) throw ParamError("degree sequence has odd sum");
    for (int d : degrees)
        if (d < 1 || d >= n) throw ParamError("degree " + std::to_string(d) +
                                              " infeasible for a simple graph on " +
                                              std::to_string(n) + " vertices");
    for (int attempt = 0; attempt < attempts; ++attempt) {
        RngStream rng(seed, static_cast<std::uint64_t>(attempt));
        auto edges = paired_multigraph(degrees, rng);
        if (!make_simple(edges, rng)) continue;
        try {
            return Graph::from_edges(edges, n);
        } catch (const DisconnectedError&) {
            continue;
        }
    }
    throw Error("configuration model: no simple connected pairing found within " +
                std::to_string(attempts) + " attempts");
}

}  // namespace detail

/// Generates a connected graph from the requested family. Randomized families
/// draw from streams derived from (seed, attempt); identical seeds give
/// identical graphs. Retries until connected, then errors out.
inline Graph generate(const FamilySpec& spec, std::uint64_t seed = 0) {
    const int n = spec.n;
    constexpr int retry_budget = 500;
    switch (spec.family) {
        case Family::complete: {
            if (n < 2) throw ParamError("complete graph needs n >= 2");
            std::vector<Graph::Edge> edges;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
            return Graph::from_edges(edges, n);
        }
        case Family::cycle: {
            if (n < 3) throw ParamError("cycle needs n >= 3");
            std::vector<Graph::Edge> edges;
            for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
            return Graph::from_edges(edges, n);
        }
        case Family::path: {
            if (n < 2) throw ParamError("path needs n >= 2");
            std::vector<Graph::Edge> edges;
            for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
            return Graph::from_edges(edges, n);
        }
        case Family::star: {
            if (n < 2) throw ParamError("star needs n >= 2");
            std::vector<Graph::Edge> edges;
            for (int i = 1; i < n; ++i) edges.push_back({0, i});
            return Graph::from_edges(edges, n);
        }
        case Family::dumbbell:
            return detail::clique_path_dumbbell(n);
        case Family::random_regular: {
            if (n < 2 || spec.r < 1) throw ParamError("random-regular needs n >= 2, r >= 1");
            if (spec.r >= n) throw ParamError("random-regular needs r < n");
            if ((static_cast<long long>(spec.r) * n) % 2 != 0)
                throw ParamError("random-regular needs r*n even");
            return detail::configuration_model(std::vector<int>(n, spec.r), seed, retry_budget);
        }
        case Family::power_law: {
            // Degree sequence: ceil(n / d^alpha) vertices of degree d for
            // d = 3 .. floor(sqrt(n)). The resulting vertex count is
            // determined by the sequence, not by n.
            if (!(spec.alpha > 2.0 && spec.alpha < 3.0))
                throw ParamError("power-law needs 2 < alpha < 3");
            const int d_max = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
            if (d_max < 3) throw ParamError("power-law needs n >= 9");
            std::vector<int> degrees;
            for (int d = 3; d <= d_max; ++d) {
                const auto count = static_cast<long long>(
                    std::ceil(static_cast<double>(n) / std::pow(static_cast<double>(d), spec.alpha)));
                degrees.insert(degrees.end(), static_cast<std::size_t>(count), d);
            }
            // An odd stub total cannot be paired; bump one minimum-degree vertex.
            if (std::accumulate(degrees.begin(), degrees.end(), 0LL) % 2 != 0) degrees.front() += 1;
            return detail::configuration_model(degrees, seed, retry_budget);
        }
        case Family::erdos_renyi: {
            if (n < 2) throw ParamError("erdos-renyi needs n >= 2");
            if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw ParamError("erdos-renyi needs 0 <= p <= 1");
            for (int attempt = 0; attempt < retry_budget; ++attempt) {
                RngStream rng(seed, static_cast<std::uint64_t>(attempt));
                std::vector<Graph::Edge> edges;
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j)
                        if (rng.unit() < spec.p) edges.push_back({i, j});
                if (edges.empty()) continue;
                try {
                    return Graph::from_edges(edges, n);
                } catch (const DisconnectedError&) {
                    continue;
                }
            }
            throw Error("erdos-renyi: no connected sample within retry budget");
        }
    }
    throw ParamError("unknown family");
}

}  // namespace coalesce
