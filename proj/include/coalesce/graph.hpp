#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coalesce/error.hpp"

namespace coalesce {

/// Undirected simple connected graph. Immutable after construction.
class Graph {
public:
    using Edge = std::pair<int, int>;

    /// Builds a graph from an edge list. Edges are normalized (u < v) and
    /// deduplicated. Throws on self-loops, empty input, or a disconnected
    /// result. `n` is taken as max vertex index + 1 when not given.
    static Graph from_edges(const std::vector<Edge>& raw_edges, int n = -1) {
        if (raw_edges.empty()) throw Error("graph has no edges");
        std::set<Edge> dedup;
        int max_v = -1;
        for (auto [u, v] : raw_edges) {
            if (u == v) throw Error("self-loop at vertex " + std::to_string(u));
            if (u < 0 || v < 0) throw Error("negative vertex index");
            if (u > v) std::swap(u, v);
            dedup.insert({u, v});
            max_v = std::max(max_v, v);
        }
        if (n < 0) n = max_v + 1;
        if (max_v >= n) throw Error("vertex index " + std::to_string(max_v) +
                                    " out of range for n=" + std::to_string(n));
        Graph g;
        g.n_ = n;
        g.edges_.assign(dedup.begin(), dedup.end());
        g.adj_.resize(n);
        for (auto [u, v] : g.edges_) {
            g.adj_[u].push_back(v);
            g.adj_[v].push_back(u);
        }
        for (auto& nbrs : g.adj_) std::sort(nbrs.begin(), nbrs.end());
        g.check_connected();
        g.bipartite_ = g.compute_bipartite();
        return g;
    }

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    bool is_bipartite() const { return bipartite_; }

    /// Canonical edge-list text: one "u v" line per edge, sorted
    /// lexicographically, no header.
    std::string to_edge_list() const {
        std::ostringstream out;
        for (auto [u, v] : edges_) out << u << ' ' << v << '\n';
        return out.str();
    }

private:
    Graph() = default;

    void check_connected() const {
        std::vector<char> seen(n_, 0);
        std::queue<int> frontier;
        frontier.push(0);
        seen[0] = 1;
        int reached = 1;
        while (!frontier.empty()) {
            const int u = frontier.front();
            frontier.pop();
            for (int w : adj_[u])
                if (!seen[w]) {
                    seen[w] = 1;
                    ++reached;
                    frontier.push(w);
                }
        }
        if (reached != n_)
            throw DisconnectedError("graph is disconnected (" + std::to_string(reached) +
                                    " of " + std::to_string(n_) + " vertices reachable)");
    }

    bool compute_bipartite() const {
        std::vector<int> color(n_, -1);
        std::queue<int> frontier;
        color[0] = 0;
        frontier.push(0);
        while (!frontier.empty()) {
            const int u = frontier.front();
            frontier.pop();
            for (int w : adj_[u]) {
                if (color[w] < 0) {
                    color[w] = 1 - color[u];
                    frontier.push(w);
                } else if (color[w] == color[u]) {
                    return false;
                }
            }
        }
        return true;
    }

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
    bool bipartite_ = false;
};

/// Parses the edge-list text format: one edge per line as two
/// whitespace-separated 0-based vertex indices, '#' starts a comment line.
inline Graph load_edge_list(std::istream& in) {
    std::vector<Graph::Edge> edges;
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        long long u = 0, v = 0;
        if (!(fields >> u >> v))
            throw ParseError(line_no, "expected two vertex indices, got '" + line + "'");
        std::string trailing;
        if (fields >> trailing && trailing[0] != '#')
            throw ParseError(line_no, "trailing tokens after edge");
        if (u < 0 || v < 0) throw ParseError(line_no, "negative vertex index");
        if (u == v) throw ParseError(line_no, "self-loop at vertex " + std::to_string(u));
        constexpr long long index_limit = 50'000'000;
        if (u > index_limit || v > index_limit)
            throw ParseError(line_no, "vertex index out of range");
        edges.push_back({static_cast<int>(u), static_cast<int>(v)});
    }
    if (edges.empty()) throw Error("empty edge list");
    return Graph::from_edges(edges);
}

inline Graph load_edge_list(const std::string& text) {
    std::istringstream in(text);
    return load_edge_list(in);
}

/// Degree statistics, including the degree-variability ratio
/// nu = n * sum d(v)^2 / (2m)^2.
struct DegreeStats {
    long long n = 0;
    long long m = 0;
    long long min_degree = 0;
    long long max_degree = 0;
    long long sum_sq_degrees = 0;  // exact
    double avg_degree = 0.0;
    double nu = 0.0;
};

inline DegreeStats degree_stats(const Graph& g) {
    DegreeStats s;
    s.n = g.vertex_count();
    s.m = g.edge_count();
    s.min_degree = g.vertex_count();
    for (int v = 0; v < g.vertex_count(); ++v) {
        const long long d = g.degree(v);
        s.min_degree = std::min(s.min_degree, d);
        s.max_degree = std::max(s.max_degree, d);
        s.sum_sq_degrees += d * d;
    }
    s.avg_degree = 2.0 * static_cast<double>(s.m) / static_cast<double>(s.n);
    s.nu = static_cast<double>(s.n) * static_cast<double>(s.sum_sq_degrees) /
           (4.0 * static_cast<double>(s.m) * static_cast<double>(s.m));
    return s;
}

}  // namespace coalesce
