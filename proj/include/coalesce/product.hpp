#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "coalesce/chain.hpp"
#include "coalesce/error.hpp"
#include "coalesce/graph.hpp"

namespace coalesce {

using BigInt = boost::multiprecision::cpp_int;

/// k independent copies of the walk on one graph. States are k-tuples of
/// vertices in mixed-radix order (first coordinate most significant); all
/// coordinates step simultaneously.
struct ProductChain {
    int k = 0;
    int n = 0;  // base vertex count
    Chain chain;
    std::vector<bool> in_diagonal;  // tuple has a repeated coordinate

    long long size() const { return chain.size(); }

    std::vector<int> decode(long long index) const {
        std::vector<int> tuple(k);
        for (int i = k - 1; i >= 0; --i) {
            tuple[i] = static_cast<int>(index % n);
            index /= n;
        }
        return tuple;
    }

    long long encode(const std::vector<int>& tuple) const {
        long long index = 0;
        for (int v : tuple) index = index * n + v;
        return index;
    }
};

inline ProductChain build_product(const Graph& g, int k, bool lazy,
                                  long long state_cap = 100000) {
    if (k < 1) throw ParamError("product chain needs k >= 1");
    const int n = g.vertex_count();
    long long states = 1;
    for (int i = 0; i < k; ++i) {
        if (states > state_cap / n + 1) {
            states = state_cap + 1;
            break;
        }
        states *= n;
    }
    if (states > state_cap)
        throw StateCapError("product chain would need " + std::to_string(states) +
                            " states; cap is " + std::to_string(state_cap));
    // Dense transition matrix: states^2 doubles.
    if (states * states > (1LL << 28))
        throw StateCapError("product chain with " + std::to_string(states) +
                            " states will not fit in memory as a dense matrix");

    const Chain base = walk_chain(g, lazy);
    ProductChain pc;
    pc.k = k;
    pc.n = n;
    pc.chain.lazy = lazy;
    pc.chain.from_bipartite_graph = base.from_bipartite_graph;
    pc.chain.P = Eigen::MatrixXd::Zero(states, states);
    pc.chain.pi = Eigen::VectorXd(states);
    pc.in_diagonal.assign(states, false);

    std::vector<std::vector<int>> tuples(states);
    for (long long s = 0; s < states; ++s) tuples[s] = pc.decode(s);

    for (long long s = 0; s < states; ++s) {
        const auto& u = tuples[s];
        double weight = 1.0;
        for (int i = 0; i < k; ++i) weight *= base.pi[u[i]];
        pc.chain.pi[s] = weight;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (u[i] == u[j]) pc.in_diagonal[s] = true;
        for (long long t = 0; t < states; ++t) {
            const auto& x = tuples[t];
            double p = 1.0;
            for (int i = 0; i < k && p != 0.0; ++i) p *= base.P(u[i], x[i]);
            pc.chain.P(s, t) = p;
        }
        std::string label = "(";
        for (int i = 0; i < k; ++i) label += (i ? "," : "") + std::to_string(u[i]);
        label += ")";
        pc.chain.labels.push_back(std::move(label));
    }
    return pc;
}

/// Sum over collision tuples (some coordinate repeated) of the product of
/// coordinate degrees, exactly: (2m)^k - k! * e_k(d_1..d_n), where e_k is the
/// k-th elementary symmetric polynomial of the degree sequence. Valid for all
/// k >= 2; for k > n every tuple collides and e_k = 0.
inline BigInt diagonal_degree(const Graph& g, int k) {
    if (k < 2) throw ParamError("diagonal degree needs k >= 2");
    const int n = g.vertex_count();
    BigInt total = 1;
    const BigInt two_m = 2 * static_cast<long long>(g.edge_count());
    for (int i = 0; i < k; ++i) total *= two_m;

    const int cap = std::min(k, n);
    std::vector<BigInt> e(cap + 1);
    e[0] = 1;
    for (int v = 0; v < n; ++v) {
        const long long d = g.degree(v);
        for (int j = std::min(v + 1, cap); j >= 1; --j) e[j] += e[j - 1] * d;
    }
    BigInt distinct = (k <= n) ? e[k] : BigInt(0);
    for (int i = 2; i <= k; ++i) distinct *= i;  // k! * e_k
    return total - distinct;
}

/// Stationary mass of the collision set: diagonal_degree / (2m)^k.
inline double diagonal_mass(const Graph& g, int k) {
    BigInt total = 1;
    const BigInt two_m = 2 * static_cast<long long>(g.edge_count());
    for (int i = 0; i < k; ++i) total *= two_m;
    const BigInt d_s = diagonal_degree(g, k);
    return d_s.convert_to<double>() / total.convert_to<double>();
}

/// Product chain with the whole collision set merged into one state (kept
/// last). Transitions out of the merged state are the stationary-weighted
/// average of the originals, which preserves reversibility; every other row
/// just reroutes its collision mass.
struct CollapsedChain {
    Chain chain;                        // gamma is the last state
    int gamma_index = 0;
    double pi_gamma = 0.0;
    std::vector<long long> orig_index;  // product index per non-gamma state
};

inline CollapsedChain collapse_diagonal(const ProductChain& pc) {
    const long long states = pc.size();
    std::vector<long long> keep;
    double pi_gamma = 0.0;
    std::vector<long long> to_new(states, -1);
    for (long long s = 0; s < states; ++s) {
        if (pc.in_diagonal[s]) {
            pi_gamma += pc.chain.pi[s];
        } else {
            to_new[s] = static_cast<long long>(keep.size());
            keep.push_back(s);
        }
    }
    if (keep.empty()) throw ChainError("every product state is a collision state");
    if (pi_gamma <= 0.0) throw ChainError("collision set is empty");

    const long long outside = static_cast<long long>(keep.size());
    const long long total = outside + 1;
    const int gamma = static_cast<int>(outside);
    CollapsedChain cc;
    cc.gamma_index = gamma;
    cc.pi_gamma = pi_gamma;
    cc.orig_index = keep;
    cc.chain.lazy = pc.chain.lazy;
    cc.chain.from_bipartite_graph = pc.chain.from_bipartite_graph;
    cc.chain.P = Eigen::MatrixXd::Zero(total, total);
    cc.chain.pi = Eigen::VectorXd(total);

    for (long long i = 0; i < outside; ++i) {
        const long long s = keep[i];
        cc.chain.pi[i] = pc.chain.pi[s];
        double into_gamma = 0.0;
        for (long long t = 0; t < states; ++t) {
            const double q = pc.chain.P(s, t);
            if (q == 0.0) continue;
            if (pc.in_diagonal[t])
                into_gamma += q;
            else
                cc.chain.P(i, to_new[t]) = q;
        }
        cc.chain.P(i, gamma) = into_gamma;
    }
    cc.chain.pi[gamma] = pi_gamma;
    double self = 0.0;
    for (long long s = 0; s < states; ++s) {
        if (!pc.in_diagonal[s]) continue;
        const double w = pc.chain.pi[s] / pi_gamma;
        for (long long t = 0; t < states; ++t) {
            const double q = pc.chain.P(s, t);
            if (q == 0.0) continue;
            if (pc.in_diagonal[t])
                self += w * q;
            else
                cc.chain.P(gamma, to_new[t]) += w * q;
        }
    }
    cc.chain.P(gamma, gamma) = self;

    if (!pc.chain.labels.empty()) {
        for (long long s : keep) cc.chain.labels.push_back(pc.chain.labels[s]);
        cc.chain.labels.push_back("gamma");
    }
    return cc;
}

/// Expected steps to reach the merged collision state, per start and averaged
/// under the collapsed stationary distribution (the merged state itself
/// contributes zero). A start whose walk can get stranded away from the merged
/// state — possible with simultaneous simple steps on a bipartite graph, where
/// walks on opposite sides never co-locate — gets an infinite expectation, and
/// the stationary average is then infinite too.
struct GammaHitting {
    Eigen::VectorXd expected;  // over collapsed states; 0 at gamma
    double e_pi_hat = 0.0;
    bool all_finite = true;
};

inline GammaHitting hit_gamma(const CollapsedChain& cc) {
    const int total = cc.chain.size();
    const int outside = total - 1;  // gamma is the last state
    const int gamma = outside;

    // The expectation from state i is finite iff every state reachable from i
    // can itself reach gamma. Two backward sweeps over the positive-transition
    // structure find (a) states with some path to gamma, (b) states that can
    // wander into the complement of (a).
    std::vector<std::vector<int>> pred(total);
    for (int i = 0; i < total; ++i)
        for (int j = 0; j < total; ++j)
            if (cc.chain.P(i, j) > 0.0) pred[j].push_back(i);
    const auto backward = [&](std::vector<char> seen) {
        std::vector<int> stack;
        for (int s = 0; s < total; ++s)
            if (seen[s]) stack.push_back(s);
        while (!stack.empty()) {
            const int s = stack.back();
            stack.pop_back();
            for (int p : pred[s])
                if (!seen[p]) {
                    seen[p] = 1;
                    stack.push_back(p);
                }
        }
        return seen;
    };
    std::vector<char> gamma_seed(total, 0);
    gamma_seed[gamma] = 1;
    const std::vector<char> can_reach = backward(std::move(gamma_seed));
    std::vector<char> stuck_seed(total, 0);
    bool any_stuck = false;
    for (int s = 0; s < total; ++s)
        if (!can_reach[s]) {
            stuck_seed[s] = 1;
            any_stuck = true;
        }
    std::vector<char> tainted(total, 0);
    if (any_stuck) tainted = backward(std::move(stuck_seed));

    std::vector<int> finite;
    finite.reserve(outside);
    for (int i = 0; i < outside; ++i)
        if (can_reach[i] && !tainted[i]) finite.push_back(i);

    const int f = static_cast<int>(finite.size());
    Eigen::VectorXd h;
    if (f > 0) {
        Eigen::MatrixXd reduced(f, f);
        for (int a = 0; a < f; ++a)
            for (int b = 0; b < f; ++b)
                reduced(a, b) = (a == b ? 1.0 : 0.0) - cc.chain.P(finite[a], finite[b]);
        h = reduced.partialPivLu().solve(Eigen::VectorXd::Ones(f));
        if (!h.allFinite()) throw ChainError("absorption solve failed");
    }

    GammaHitting result;
    result.expected =
        Eigen::VectorXd::Constant(total, std::numeric_limits<double>::infinity());
    result.expected[gamma] = 0.0;
    for (int a = 0; a < f; ++a) result.expected[finite[a]] = h[a];
    result.all_finite = f == outside;
    if (result.all_finite) {
        double avg = 0.0;
        for (int i = 0; i < outside; ++i) avg += cc.chain.pi[i] * result.expected[i];
        result.e_pi_hat = avg;
    } else {
        result.e_pi_hat = std::numeric_limits<double>::infinity();
    }
    return result;
}

}  // namespace coalesce
