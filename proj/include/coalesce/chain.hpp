#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "coalesce/error.hpp"
#include "coalesce/graph.hpp"

namespace coalesce {

/// Explicit finite Markov chain: row-stochastic transition matrix P plus its
/// stationary distribution pi. Chains built here are reversible.
struct Chain {
    Eigen::MatrixXd P;
    Eigen::VectorXd pi;
    std::vector<std::string> labels;  // may be empty for large chains
    bool lazy = false;
    bool from_bipartite_graph = false;

    int size() const { return static_cast<int>(P.rows()); }

    /// Structural checks: rows sum to 1 (1e-12), pi positive, pi P = pi
    /// (1e-10), detailed balance (1e-12).
    void validate() const {
        const int n = size();
        for (int u = 0; u < n; ++u) {
            if (std::abs(P.row(u).sum() - 1.0) > 1e-12)
                throw ChainError("row " + std::to_string(u) + " is not stochastic");
        }
        if ((pi.array() <= 0.0).any()) throw ChainError("stationary distribution not positive");
        const Eigen::VectorXd residual = P.transpose() * pi - pi;
        if (residual.cwiseAbs().maxCoeff() > 1e-10)
            throw ChainError("pi is not stationary for P");
        if (!is_reversible(1e-12)) throw ChainError("chain is not reversible");
    }

    bool is_reversible(double tol) const {
        const int n = size();
        for (int u = 0; u < n; ++u)
            for (int x = u + 1; x < n; ++x)
                if (std::abs(pi[u] * P(u, x) - pi[x] * P(x, u)) > tol) return false;
        return true;
    }
};

/// Transition chain of the random walk on g: P(v,w) = 1/d(v) for neighbors.
/// Lazy mode halves everything and puts 1/2 on the diagonal. In both cases
/// pi_v = d(v)/(2m).
inline Chain walk_chain(const Graph& g, bool lazy) {
    const int n = g.vertex_count();
    Chain c;
    c.lazy = lazy;
    c.from_bipartite_graph = g.is_bipartite();
    c.P = Eigen::MatrixXd::Zero(n, n);
    c.pi = Eigen::VectorXd(n);
    const double two_m = 2.0 * g.edge_count();
    for (int v = 0; v < n; ++v) {
        const double d = g.degree(v);
        c.pi[v] = d / two_m;
        const double step = lazy ? 1.0 / (2.0 * d) : 1.0 / d;
        for (int w : g.neighbors(v)) c.P(v, w) = step;
        if (lazy) c.P(v, v) = 0.5;
        c.labels.push_back("v" + std::to_string(v));
    }
    return c;
}

/// Real spectrum of a reversible chain, sorted descending.
struct Spectrum {
    std::vector<double> values;  // lambda_1 >= ... >= lambda_N
    double lambda2 = 0.0;
    double lambda_n = 0.0;
    double lambda = 0.0;  // max(lambda2, |lambda_n|)
    double gap = 0.0;     // 1 - lambda2

    bool lambda_is_lambda2() const { return lambda2 >= std::abs(lambda_n) - 1e-12; }
};

/// Eigenvalues via the symmetric conjugate D^{1/2} P D^{-1/2}, D = diag(pi).
/// Rejects non-reversible input.
inline Spectrum spectrum(const Chain& chain) {
    if (!chain.is_reversible(1e-10)) throw ChainError("spectrum needs a reversible chain");
    const int n = chain.size();
    const Eigen::ArrayXd root = chain.pi.array().sqrt();
    Eigen::MatrixXd sym(n, n);
    for (int u = 0; u < n; ++u)
        for (int x = 0; x < n; ++x) sym(u, x) = chain.P(u, x) * root[u] / root[x];
    sym = 0.5 * (sym + sym.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ChainError("eigensolver failed");
    Spectrum s;
    s.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    std::reverse(s.values.begin(), s.values.end());
    if (std::abs(s.values.front() - 1.0) > 1e-10)
        throw ChainError("leading eigenvalue is not 1");
    s.lambda2 = n > 1 ? s.values[1] : 1.0;
    s.lambda_n = s.values.back();
    s.lambda = std::max(s.lambda2, std::abs(s.lambda_n));
    s.gap = 1.0 - s.lambda2;
    return s;
}

namespace detail {

inline double stationary_deviation(const Eigen::MatrixXd& power, const Eigen::VectorXd& pi) {
    double worst = 0.0;
    for (int u = 0; u < power.rows(); ++u)
        for (int x = 0; x < power.cols(); ++x)
            worst = std::max(worst, std::abs(power(u, x) - pi[x]));
    return worst;
}

/// P^t assembled from the stored squarings P^(2^i).
inline Eigen::MatrixXd compose_power(const std::vector<Eigen::MatrixXd>& squares,
                                     std::uint64_t t) {
    const int n = static_cast<int>(squares.front().rows());
    Eigen::MatrixXd result;
    bool have = false;
    for (std::size_t bit = 0; bit < squares.size() && (t >> bit) != 0; ++bit) {
        if ((t >> bit) & 1U) {
            if (!have) {
                result = squares[bit];
                have = true;
            } else {
                result = (result * squares[bit]).eval();
            }
        }
    }
    if (!have) result = Eigen::MatrixXd::Identity(n, n);
    return result;
}

}  // namespace detail

/// Smallest t with max_{u,x} |P^t(u,x) - pi_x| <= eps, by repeated squaring
/// plus a binary search between the bracketing powers. eps <= 0 selects the
/// default N^{-3}. Periodic chains (simple walk on a bipartite graph) are
/// rejected with a pointer at lazy mode.
inline long long mixing_time(const Chain& chain, double eps = 0.0) {
    const int n = chain.size();
    if (eps <= 0.0) eps = 1.0 / (static_cast<double>(n) * n * n);
    if (!chain.lazy) {
        const Spectrum s = spectrum(chain);
        if (s.lambda_n <= -1.0 + 1e-9)
            throw PeriodicChainError(
                "chain is periodic and never mixes; rerun with the lazy walk");
    }
    std::vector<Eigen::MatrixXd> squares{chain.P};
    if (detail::stationary_deviation(squares[0], chain.pi) <= eps) return 1;
    int top = 0;
    while (true) {
        if (top >= 40) throw ChainError("mixing time exceeds 2^40 steps");
        squares.push_back((squares.back() * squares.back()).eval());
        ++top;
        if (detail::stationary_deviation(squares[top], chain.pi) <= eps) break;
    }
    std::uint64_t lo = 1ULL << (top - 1);  // deviation > eps here
    std::uint64_t hi = 1ULL << top;        // deviation <= eps here
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (detail::stationary_deviation(detail::compose_power(squares, mid), chain.pi) <= eps)
            hi = mid;
        else
            lo = mid;
    }
    // The deviation can dip non-monotonically in odd cases; nudge down while
    // the sub-threshold property still holds.
    while (hi > 1 && detail::stationary_deviation(detail::compose_power(squares, hi - 1),
                                                  chain.pi) <= eps)
        --hi;
    return static_cast<long long>(hi);
}

/// Exact hitting-time data for one target vertex, plus the fundamental-matrix
/// diagonal Z_vv computed along two independent routes:
///   z_from_hitting = pi_v * E_pi(H_v)   (linear solve)
///   z_from_series  = truncated sum of (P^t(v,v) - pi_v)
struct HittingProfile {
    int target = 0;
    Eigen::VectorXd expected;   // E(H_{u,target}) for all u; 0 at the target
    double from_stationarity = 0.0;
    double z_from_hitting = 0.0;
    double z_from_series = 0.0;
    bool routes_agree = true;   // |difference| <= 1e-6
    bool series_available = true;
};

inline HittingProfile hitting_profile(const Chain& chain, int target,
                                      const Spectrum* spec = nullptr,
                                      bool compute_series = true) {
    const int n = chain.size();
    if (target < 0 || target >= n) throw Error("hitting target out of range");
    HittingProfile profile;
    profile.target = target;

    // E(H_{.,v}) from (I - P_{-v}) h = 1.
    const int t_count = n - 1;
    Eigen::MatrixXd reduced(t_count, t_count);
    std::vector<int> states;
    states.reserve(t_count);
    for (int u = 0; u < n; ++u)
        if (u != target) states.push_back(u);
    for (int i = 0; i < t_count; ++i)
        for (int j = 0; j < t_count; ++j)
            reduced(i, j) = (i == j ? 1.0 : 0.0) - chain.P(states[i], states[j]);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(t_count);
    const Eigen::VectorXd h = reduced.partialPivLu().solve(ones);
    if (!h.allFinite()) throw ChainError("hitting-time solve failed");
    profile.expected = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < t_count; ++i) profile.expected[states[i]] = h[i];

    profile.from_stationarity = chain.pi.dot(profile.expected);
    profile.z_from_hitting = chain.pi[target] * profile.from_stationarity;

    if (!compute_series) {
        profile.series_available = false;
        profile.routes_agree = false;
        profile.z_from_series = std::numeric_limits<double>::quiet_NaN();
        return profile;
    }
    Spectrum local;
    if (spec == nullptr) {
        local = spectrum(chain);
        spec = &local;
    }
    const double lambda = spec->lambda;
    if (lambda >= 1.0 - 1e-12) {
        profile.series_available = false;
        profile.routes_agree = false;
        profile.z_from_series = std::numeric_limits<double>::quiet_NaN();
        return profile;
    }
    // Truncate once the geometric tail bound lambda^t/(1-lambda) dips under 1e-9.
    const auto t_stop = static_cast<long long>(
        std::ceil(std::log(1e-9 * (1.0 - lambda)) / std::log(lambda))) + 1;
    Eigen::VectorXd column = Eigen::VectorXd::Zero(n);
    column[target] = 1.0;  // column target of P^t
    double series = 0.0;
    for (long long t = 0; t < t_stop; ++t) {
        series += column[target] - chain.pi[target];
        column = (chain.P * column).eval();
    }
    profile.z_from_series = series;
    profile.routes_agree = std::abs(profile.z_from_series - profile.z_from_hitting) <= 1e-6;
    return profile;
}

/// Hitting profiles for every target, with H_max over ordered pairs.
struct HittingSummary {
    std::vector<HittingProfile> profiles;
    double h_max = 0.0;
    int argmax_from = 0;
    int argmax_to = 0;
    double max_e_pi = 0.0;   // max_v E_pi(H_v)
    double max_z = 0.0;      // max_v Z_vv (hitting route)
};

inline HittingSummary full_hitting(const Chain& chain, const Spectrum* spec = nullptr,
                                   bool compute_series = true) {
    Spectrum local;
    if (spec == nullptr) {
        local = spectrum(chain);
        spec = &local;
    }
    HittingSummary summary;
    for (int v = 0; v < chain.size(); ++v) {
        HittingProfile p = hitting_profile(chain, v, spec, compute_series);
        for (int u = 0; u < chain.size(); ++u) {
            if (p.expected[u] > summary.h_max) {
                summary.h_max = p.expected[u];
                summary.argmax_from = u;
                summary.argmax_to = v;
            }
        }
        summary.max_e_pi = std::max(summary.max_e_pi, p.from_stationarity);
        summary.max_z = std::max(summary.max_z, p.z_from_hitting);
        summary.profiles.push_back(std::move(p));
    }
    return summary;
}

}  // namespace coalesce
