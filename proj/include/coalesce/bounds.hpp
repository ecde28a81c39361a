#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coalesce/chain.hpp"
#include "coalesce/error.hpp"
#include "coalesce/exact.hpp"
#include "coalesce/graph.hpp"
#include "coalesce/montecarlo.hpp"
#include "coalesce/product.hpp"

namespace coalesce {

/// Particle-count threshold floor(max{2, min{(n/nu)^1/2, m/(2*Dmax), ln n}}).
inline int k_star(const DegreeStats& ds) {
    const double a = std::sqrt(static_cast<double>(ds.n) / ds.nu);
    const double b = static_cast<double>(ds.m) / (2.0 * ds.max_degree);
    const double c = std::log(static_cast<double>(ds.n));
    const double inner = std::min(a, std::min(b, c));
    return static_cast<int>(std::floor(std::max(2.0, inner)));
}

/// The closed-form bracket values that the measured quantities are compared
/// against. All logs are natural. None of these carries an explicit constant
/// guarantee except the nu-form hitting bracket (constant 8).
struct BoundBrackets {
    int k = 2;
    double coalesce_polylog = 0.0;   // (ln^4 n + n/nu) / gap
    double coalesce_edge_form = 0.0; // ((m/Dmax) ln n)^2 / gap
    double meeting_k_form = 0.0;     // (k ln n + n/(nu k^2)) / gap
    double gamma_hit_nu_form = 0.0;  // (8/k^2)(n/nu) / gap
    double coalesce_k_form = 0.0;    // (k^2 ln n + n/nu) / gap
};

inline BoundBrackets bound_values(const Graph& g, const Spectrum& spec,
                                  const DegreeStats& ds, int k) {
    (void)g;
    if (k < 2) throw ParamError("bracket evaluation needs k >= 2");
    if (!spec.lambda_is_lambda2())
        throw ParamError(
            "bracket evaluation needs lambda = lambda2; make the chain lazy");
    const double n = ds.n;
    const double log_n = std::log(n);
    const double gap = spec.gap;
    if (gap <= 0.0) throw ParamError("chain has no spectral gap");
    BoundBrackets b;
    b.k = k;
    const double n_over_nu = n / ds.nu;
    b.coalesce_polylog = (std::pow(log_n, 4) + n_over_nu) / gap;
    const double edge_term = (static_cast<double>(ds.m) / ds.max_degree) * log_n;
    b.coalesce_edge_form = edge_term * edge_term / gap;
    b.meeting_k_form = (k * log_n + n_over_nu / (k * k)) / gap;
    b.gamma_hit_nu_form = (8.0 / (k * k)) * n_over_nu / gap;
    b.coalesce_k_form = (k * k * log_n + n_over_nu) / gap;
    return b;
}

/// e^{-floor(t / (T + 3 E_pi(H_v)))}: probability bound for a walk avoiding a
/// fixed vertex through step t, with the floor taken literally.
inline double avoidance_bound(double t, double t_mix, double e_pi_hv) {
    if (t < 0.0 || t_mix < 0.0 || e_pi_hv < 0.0)
        throw ParamError("avoidance bound needs nonnegative inputs");
    const double tau = t_mix + 3.0 * e_pi_hv;
    if (tau <= 0.0) return 1.0;
    return std::exp(-std::floor(t / tau));
}

/// t* = k* ln n (T_Gamma + 3 E_pihat(H_gamma)), the halving time scale.
/// Exact factors when the k*-fold product fits under the state cap; otherwise
/// the mixing time falls back to k* * T_base and the hitting time to its
/// nu-form bracket, with provenance recorded.
struct TStar {
    double value = 0.0;
    int k = 2;
    double log_factor = 0.0;
    double t_mix_gamma = 0.0;
    bool t_mix_exact = false;
    double gamma_hit = 0.0;
    bool gamma_hit_exact = false;
};

inline TStar t_star(const Graph& g, const Spectrum& spec, const DegreeStats& ds,
                    long long product_cap = 2500) {
    TStar t;
    t.k = k_star(ds);
    t.log_factor = std::log(static_cast<double>(ds.n));
    bool exact = true;
    double states = 1.0;
    for (int i = 0; i < t.k; ++i) states *= ds.n;
    if (states > static_cast<double>(product_cap)) exact = false;
    if (exact) {
        const ProductChain pc = build_product(g, t.k, true, product_cap);
        const CollapsedChain cc = collapse_diagonal(pc);
        t.t_mix_gamma = static_cast<double>(mixing_time(cc.chain));
        t.t_mix_exact = true;
        t.gamma_hit = hit_gamma(cc).e_pi_hat;
        t.gamma_hit_exact = true;
    } else {
        const Chain base = walk_chain(g, true);
        t.t_mix_gamma = static_cast<double>(t.k) * static_cast<double>(mixing_time(base));
        t.t_mix_exact = false;
        t.gamma_hit = bound_values(g, spec, ds, t.k).gamma_hit_nu_form;
        t.gamma_hit_exact = false;
    }
    t.value = t.k * t.log_factor * (t.t_mix_gamma + 3.0 * t.gamma_hit);
    return t;
}

/// One line of the report. `kind` is "info" (plain quantity), "ratio"
/// (measured/bound comparison with no verdict, because the reference formula
/// has an unspecified constant), or "literal" (inequality with explicit
/// constants; carries pass/fail).
struct ReportRow {
    std::string name;
    std::string expression;
    std::string kind;
    std::string relation;  // "<=", ">=", "==", "in" for literal rows
    std::optional<double> measured;
    std::optional<double> measured_se;
    std::optional<double> bound;
    std::optional<double> ratio;
    std::optional<bool> pass;
    std::string note;
};

struct ReportOptions {
    bool lazy = true;
    long long mc_trials = 2000;       // completion-time sampling when no oracle fits
    std::uint64_t seed = 1;
    int workers = 1;
    long long product_cap = 2500;     // max product-chain states built here
    int oracle_max_n = 5;             // full-process exact oracles
    int survival_max_n = 15;          // avoidance-decay scan
    double survival_horizon = 20.0;   // t range multiplier
};

struct BoundsReport {
    nlohmann::ordered_json meta;
    std::vector<ReportRow> rows;

    bool all_literal_pass() const {
        for (const auto& row : rows)
            if (row.kind == "literal" && row.pass.has_value() && !*row.pass) return false;
        return true;
    }

    nlohmann::ordered_json to_json() const;
    std::string to_csv() const;
};

namespace detail {

inline nlohmann::ordered_json opt_json(const std::optional<double>& v) {
    if (!v.has_value() || !std::isfinite(*v)) return nullptr;
    return *v;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string csv_num(const std::optional<double>& v) {
    if (!v.has_value() || !std::isfinite(*v)) return "";
    std::ostringstream os;
    os.precision(17);
    os << *v;
    return os.str();
}

}  // namespace detail

inline nlohmann::ordered_json BoundsReport::to_json() const {
    nlohmann::ordered_json j;
    j["meta"] = meta;
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json r;
        r["name"] = row.name;
        r["expression"] = row.expression;
        r["kind"] = row.kind;
        r["relation"] = row.relation;
        r["measured"] = detail::opt_json(row.measured);
        r["measured_se"] = detail::opt_json(row.measured_se);
        r["bound"] = detail::opt_json(row.bound);
        r["ratio"] = detail::opt_json(row.ratio);
        if (row.pass.has_value())
            r["pass"] = *row.pass;
        else
            r["pass"] = nullptr;
        r["note"] = row.note;
        list.push_back(r);
    }
    j["rows"] = list;
    j["all_literal_pass"] = all_literal_pass();
    return j;
}

inline std::string BoundsReport::to_csv() const {
    std::ostringstream os;
    os << "name,kind,relation,measured,measured_se,bound,ratio,pass,expression,note\n";
    for (const auto& row : rows) {
        os << detail::csv_field(row.name) << ',' << row.kind << ',' << row.relation
           << ',' << detail::csv_num(row.measured) << ','
           << detail::csv_num(row.measured_se) << ',' << detail::csv_num(row.bound)
           << ',' << detail::csv_num(row.ratio) << ',';
        if (row.pass.has_value()) os << (*row.pass ? "pass" : "fail");
        os << ',' << detail::csv_field(row.expression) << ','
           << detail::csv_field(row.note) << '\n';
    }
    return os.str();
}

inline BoundsReport make_report(const Graph& g, const ReportOptions& opt) {
    BoundsReport rep;
    const DegreeStats ds = degree_stats(g);
    const Chain chain = walk_chain(g, opt.lazy);
    const Spectrum spec = spectrum(chain);
    const int n = ds.n;
    const double gap = spec.gap;

    rep.meta["vertices"] = ds.n;
    rep.meta["edges"] = ds.m;
    rep.meta["min_degree"] = ds.min_degree;
    rep.meta["max_degree"] = ds.max_degree;
    rep.meta["lazy"] = opt.lazy;
    rep.meta["bipartite"] = g.is_bipartite();
    rep.meta["mc_trials"] = opt.mc_trials;
    rep.meta["seed"] = opt.seed;
    rep.meta["log_convention"] = "natural";

    auto info = [&](const std::string& name, const std::string& expr, double value,
                    const std::string& note = "") {
        ReportRow row;
        row.name = name;
        row.expression = expr;
        row.kind = "info";
        row.measured = value;
        row.note = note;
        rep.rows.push_back(std::move(row));
    };

    info("degree_variability", "nu = n * sum(d(v)^2) / (2m)^2", ds.nu);
    info("lambda2", "second-largest walk eigenvalue", spec.lambda2);
    info("lambda_min", "smallest walk eigenvalue", spec.lambda_n);
    info("spectral_gap", "1 - lambda2", gap);

    // Mixing time; periodic chains leave an annotation instead of a value.
    std::optional<long long> t_mix;
    {
        ReportRow row;
        row.name = "mixing_time";
        row.expression = "min t with max|P^t(u,x) - pi_x| <= n^-3";
        row.kind = "info";
        try {
            t_mix = mixing_time(chain);
            row.measured = static_cast<double>(*t_mix);
        } catch (const Error& e) {
            row.note = e.what();
        }
        rep.rows.push_back(std::move(row));
    }

    const HittingSummary hits = full_hitting(chain, &spec, /*compute_series=*/false);
    info("hitting_max", "max over ordered pairs of E(steps u -> v)", hits.h_max,
         "argmax " + std::to_string(hits.argmax_from) + "->" +
             std::to_string(hits.argmax_to));
    info("stationary_hit_max", "max over v of E_pi(steps to v)", hits.max_e_pi);

    const int ks = k_star(ds);
    info("k_star", "floor(max{2, min{sqrt(n/nu), m/(2*max_degree), ln n}})",
         static_cast<double>(ks));

    // t*: exact collapsed-chain factors when the product fits, else surrogates.
    {
        ReportRow row;
        row.name = "t_star";
        row.expression =
            "k_star * ln n * (T_collapsed + 3 * E_pihat(steps to merged state))";
        row.kind = "info";
        try {
            const TStar ts = t_star(g, spec, ds, opt.product_cap);
            row.measured = ts.value;
            row.note = std::string("mixing factor ") +
                       (ts.t_mix_exact ? "measured on the collapsed chain"
                                       : "surrogate k_star * T_base") +
                       "; hitting factor " +
                       (ts.gamma_hit_exact ? "exact solve" : "nu-form bracket");
        } catch (const Error& e) {
            row.note = e.what();
        }
        rep.rows.push_back(std::move(row));
    }

    // Literal: spectral gap floor.
    {
        ReportRow row;
        row.name = "spectral_gap_floor";
        row.expression = "1 - lambda2 >= 1/(2 n^2)";
        row.kind = "literal";
        row.relation = ">=";
        row.measured = gap;
        row.bound = 1.0 / (2.0 * static_cast<double>(n) * n);
        row.ratio = *row.measured / *row.bound;
        row.pass = *row.measured >= *row.bound;
        rep.rows.push_back(std::move(row));
    }

    // Literal: worst-pair hitting time sandwich.
    {
        ReportRow row;
        row.name = "hitting_max_sandwich";
        row.expression = "m/(2*min_degree) <= H_max <= 4m/((1-lambda2)*min_degree)";
        row.kind = "literal";
        row.relation = "in";
        row.measured = hits.h_max;
        const double lower = static_cast<double>(ds.m) / (2.0 * ds.min_degree);
        const double upper = 4.0 * static_cast<double>(ds.m) / (gap * ds.min_degree);
        row.bound = upper;
        row.ratio = hits.h_max / upper;
        row.pass = lower <= hits.h_max && hits.h_max <= upper;
        row.note = "lower bound " + std::to_string(lower);
        rep.rows.push_back(std::move(row));
    }

    // Literal: fundamental-matrix diagonal capped by the gap.
    {
        ReportRow row;
        row.name = "z_diagonal_cap";
        row.expression = "max_v Z_vv <= 1/(1-lambda2)";
        row.kind = "literal";
        row.relation = "<=";
        row.measured = hits.max_z;
        row.bound = 1.0 / gap;
        row.ratio = *row.measured / *row.bound;
        row.pass = *row.measured <= *row.bound + 1e-12;
        rep.rows.push_back(std::move(row));
    }

    // Literal: avoidance probability decays at the floor-exponential rate.
    {
        ReportRow row;
        row.name = "avoidance_decay";
        row.expression =
            "Pr(avoid v through t) <= exp(-floor(t/(T_mix + 3*E_pi(H_v))))";
        row.kind = "literal";
        row.relation = "<=";
        if (n > opt.survival_max_n) {
            row.note = "skipped: graph above survival scan size";
        } else if (!t_mix.has_value()) {
            row.note = "skipped: no mixing time (periodic chain)";
        } else {
            double worst = 0.0;
            int worst_v = 0;
            long long worst_t = 0;
            for (int v = 0; v < n; ++v) {
                const double e_pi = hits.profiles[static_cast<std::size_t>(v)].from_stationarity;
                const double tau = static_cast<double>(*t_mix) + 3.0 * e_pi;
                const auto horizon = static_cast<long long>(opt.survival_horizon * tau) + 1;
                const auto curve = survival_max_curve(g, opt.lazy, v, static_cast<int>(horizon));
                for (long long t = 1; t <= horizon; ++t) {
                    const double bound = avoidance_bound(static_cast<double>(t),
                                                         static_cast<double>(*t_mix), e_pi);
                    const double r = curve[static_cast<std::size_t>(t)] / bound;
                    if (r > worst) {
                        worst = r;
                        worst_v = v;
                        worst_t = t;
                    }
                }
            }
            row.measured = worst;
            row.bound = 1.0 + 1e-9;
            row.ratio = worst;
            row.pass = worst <= 1.0 + 1e-9;
            row.note = "worst margin at v=" + std::to_string(worst_v) +
                       ", t=" + std::to_string(worst_t);
        }
        rep.rows.push_back(std::move(row));
    }

    // Literal: collision-set stationary mass floor, exact integer arithmetic:
    // 8 d(S_k) >= k^2 sum(d^2) (2m)^(k-2) for 2 <= k <= k_star.
    {
        ReportRow row;
        row.name = "collision_mass_floor";
        row.expression = "pi_merged(k) >= k^2 nu / (8n) for 2 <= k <= k_star";
        row.kind = "literal";
        row.relation = ">=";
        bool pass = true;
        double min_ratio = std::numeric_limits<double>::infinity();
        double measured_at_min = 0.0, bound_at_min = 0.0;
        for (int k = 2; k <= ks; ++k) {
            const BigInt lhs = 8 * diagonal_degree(g, k);
            BigInt rhs = BigInt(k) * k * ds.sum_sq_degrees;
            for (int i = 0; i < k - 2; ++i) rhs *= 2 * static_cast<long long>(ds.m);
            if (lhs < rhs) pass = false;
            const double mass = diagonal_mass(g, k);
            const double floor_value = k * k * ds.nu / (8.0 * n);
            const double r = mass / floor_value;
            if (r < min_ratio) {
                min_ratio = r;
                measured_at_min = mass;
                bound_at_min = floor_value;
            }
        }
        row.measured = measured_at_min;
        row.bound = bound_at_min;
        row.ratio = min_ratio;
        row.pass = pass;
        row.note = "integer-verified for k in [2," + std::to_string(ks) + "]";
        rep.rows.push_back(std::move(row));
    }

    // Literal: pairwise collision mass equals the squared-degree sum exactly.
    {
        ReportRow row;
        row.name = "collision_mass_pair_identity";
        row.expression = "d(S_2) == sum(d(v)^2) == (2m)^2 nu / n";
        row.kind = "literal";
        row.relation = "==";
        const BigInt d_s2 = diagonal_degree(g, 2);
        row.measured = d_s2.convert_to<double>();
        row.bound = static_cast<double>(ds.sum_sq_degrees);
        row.ratio = *row.measured / *row.bound;
        row.pass = d_s2 == BigInt(ds.sum_sq_degrees);
        rep.rows.push_back(std::move(row));
    }

    // Pairwise product-chain quantities (built only under the state cap).
    std::optional<double> gamma_hit_exact;
    std::optional<double> pi_gamma;
    std::optional<double> t_mix_collapsed;
    std::optional<double> worst_meeting;
    std::string pair_note = "pair product chain above state cap";
    if (static_cast<long long>(n) * n <= opt.product_cap) {
        const ProductChain pc = build_product(g, 2, opt.lazy, opt.product_cap);
        const CollapsedChain cc = collapse_diagonal(pc);
        pi_gamma = cc.pi_gamma;
        const GammaHitting gh = hit_gamma(cc);
        if (gh.all_finite) {
            gamma_hit_exact = gh.e_pi_hat;
            double worst = 0.0;
            for (int i = 0; i + 1 < cc.chain.size(); ++i)
                worst = std::max(worst, gh.expected[i]);
            worst_meeting = worst;
            pair_note = "exact product solve";
        } else {
            pair_note =
                "merged state unreachable from some pair starts (simple walk on a "
                "bipartite graph); expected meeting is infinite";
        }
        try {
            t_mix_collapsed = static_cast<double>(mixing_time(cc.chain));
        } catch (const Error&) {
        }
    }

    // Literal: stationary hit of the merged collision state capped by mass*gap.
    {
        ReportRow row;
        row.name = "merged_hit_cap";
        row.expression = "E_pihat(steps to merged state) <= 1/(pi_merged*(1-lambda2))";
        row.kind = "literal";
        row.relation = "<=";
        if (!gamma_hit_exact.has_value()) {
            row.note = "skipped: " + pair_note;
        } else {
            row.measured = *gamma_hit_exact;
            row.bound = 1.0 / (*pi_gamma * gap);
            row.ratio = *row.measured / *row.bound;
            row.pass = *row.measured <= *row.bound * (1.0 + 1e-12);
        }
        rep.rows.push_back(std::move(row));
    }

    // Exact or sampled full-coalescence time.
    std::optional<double> coalesce_measured;
    std::optional<double> coalesce_se;
    std::string coalesce_note;
    bool coalesce_is_exact = false;
    const bool walk_ok = opt.lazy || !g.is_bipartite();
    if (n <= 6 && walk_ok) {
        try {
            coalesce_measured = exact_coalescence_time(g, opt.lazy);
            coalesce_note = "exact occupied-set solve";
            coalesce_is_exact = true;
        } catch (const Error& e) {
            coalesce_note = e.what();
        }
    } else if (walk_ok) {
        ProcessConfig cfg;
        cfg.process = Process::coalescing;
        cfg.lazy = opt.lazy;
        cfg.trials = opt.mc_trials;
        cfg.seed = opt.seed;
        cfg.workers = opt.workers;
        const SimOutcome out = simulate_coalescing(g, cfg);
        coalesce_measured = out.completion.mean;
        coalesce_se = out.completion.std_error;
        coalesce_note = "sampled, " + std::to_string(opt.mc_trials) + " trials";
    } else {
        coalesce_note = "skipped: simple walk on a bipartite graph";
    }

    auto ratio_row = [&](const std::string& name, const std::string& expr,
                         std::optional<double> measured, std::optional<double> se,
                         std::optional<double> bound, const std::string& note) {
        ReportRow row;
        row.name = name;
        row.expression = expr;
        row.kind = "ratio";
        row.measured = measured;
        row.measured_se = se;
        row.bound = bound;
        if (measured.has_value() && bound.has_value() && *bound != 0.0)
            row.ratio = *measured / *bound;
        row.note = note;
        rep.rows.push_back(std::move(row));
    };

    std::optional<BoundBrackets> brackets2;
    std::string bracket_err;
    try {
        brackets2 = bound_values(g, spec, ds, 2);
    } catch (const Error& e) {
        bracket_err = e.what();
    }

    ratio_row("coalescence_vs_polylog_form",
              "E(full coalescence) vs (ln^4 n + n/nu)/(1-lambda2)", coalesce_measured,
              coalesce_se,
              brackets2 ? std::optional<double>(brackets2->coalesce_polylog)
                        : std::nullopt,
              bracket_err.empty() ? coalesce_note : bracket_err);
    ratio_row("coalescence_vs_edge_log_form",
              "E(full coalescence) vs ((m/max_degree) ln n)^2/(1-lambda2)",
              coalesce_measured, coalesce_se,
              brackets2 ? std::optional<double>(brackets2->coalesce_edge_form)
                        : std::nullopt,
              bracket_err.empty() ? coalesce_note : bracket_err);
    ratio_row("pair_meeting_vs_k_form",
              "worst-start E(pair meeting) vs (k ln n + n/(nu k^2))/(1-lambda2), k=2",
              worst_meeting, std::nullopt,
              brackets2 ? std::optional<double>(brackets2->meeting_k_form)
                        : std::nullopt,
              pair_note);
    ratio_row("merged_hit_vs_nu_form",
              "E_pihat(steps to merged state) vs (8/k^2)(n/nu)/(1-lambda2), k=2",
              gamma_hit_exact, std::nullopt,
              brackets2 ? std::optional<double>(brackets2->gamma_hit_nu_form)
                        : std::nullopt,
              gamma_hit_exact ? "" : pair_note);
    ratio_row("pair_coalescence_vs_k_form",
              "E(pair coalescence) vs (k^2 ln n + n/nu)/(1-lambda2), k=2",
              worst_meeting, std::nullopt,
              brackets2 ? std::optional<double>(brackets2->coalesce_k_form)
                        : std::nullopt,
              "two particles: coalescence = first meeting");
    {
        std::optional<double> bound;
        std::string note = "(1+o(1)) factor taken as 1";
        if (t_mix_collapsed.has_value() && gamma_hit_exact.has_value())
            bound = *t_mix_collapsed + *gamma_hit_exact;
        else if (!gamma_hit_exact.has_value())
            note = pair_note;
        else
            note = "collapsed chain has no mixing time";
        ratio_row("pair_meeting_vs_mix_plus_hit",
                  "worst-start E(pair meeting) vs T_collapsed + E_pihat(steps to merged)",
                  worst_meeting, std::nullopt, bound, note);
    }
    {
        std::optional<double> bound;
        if (t_mix.has_value() && gap > 0.0)
            bound = std::log(static_cast<double>(n)) / gap;
        ratio_row("mixing_vs_log_form", "T_mix vs ln n/(1-lambda2)",
                  t_mix ? std::optional<double>(static_cast<double>(*t_mix))
                        : std::nullopt,
                  std::nullopt, bound,
                  t_mix ? "reference constant unspecified" : "no mixing time");
    }

    // Literal: full coalescence bounded by the summed worst-case meetings.
    {
        ReportRow row;
        row.name = "coalescence_vs_meeting_sum";
        row.expression =
            "E(full coalescence) <= sum over s=2..n of worst-start E(meeting of s walks)";
        row.kind = "literal";
        row.relation = "<=";
        if (n > opt.oracle_max_n || !walk_ok || !coalesce_is_exact) {
            row.note = "skipped: needs the exact occupied-set oracle (n <= " +
                       std::to_string(opt.oracle_max_n) + ")";
        } else {
            double sum = 0.0;
            bool ok = true;
            for (int s = 2; s <= n && ok; ++s) {
                try {
                    sum += meeting_times(g, s, opt.lazy,
                                         static_cast<long long>(std::pow(n, s)) + 1)
                               .worst;
                } catch (const Error& e) {
                    row.note = e.what();
                    ok = false;
                }
            }
            if (ok) {
                row.measured = coalesce_measured;
                row.bound = sum;
                row.ratio = *row.measured / *row.bound;
                row.pass = *row.measured <= *row.bound * (1.0 + 1e-12);
            }
        }
        rep.rows.push_back(std::move(row));
    }

    // Literal: consensus dynamics and coalescing particles agree exactly.
    {
        ReportRow row;
        row.name = "consensus_coalescence_match";
        row.expression = "|E(consensus) - E(full coalescence)| <= 1e-8";
        row.kind = "literal";
        row.relation = "<=";
        if (n > opt.oracle_max_n || !walk_ok) {
            row.note = "skipped: needs both exact oracles (n <= " +
                       std::to_string(opt.oracle_max_n) + ")";
        } else {
            try {
                const double voter = exact_voter_time(g, opt.lazy);
                const double walks = exact_coalescence_time(g, opt.lazy);
                row.measured = std::abs(voter - walks);
                row.bound = 1e-8;
                row.pass = *row.measured <= 1e-8;
                row.note = "consensus " + std::to_string(voter) + ", coalescence " +
                           std::to_string(walks);
            } catch (const Error& e) {
                row.note = e.what();
            }
        }
        rep.rows.push_back(std::move(row));
    }

    return rep;
}

}  // namespace coalesce
