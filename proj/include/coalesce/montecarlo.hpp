#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "coalesce/error.hpp"
#include "coalesce/graph.hpp"
#include "coalesce/rng.hpp"

namespace coalesce {

enum class Process { coalescing, voter, tokens };

inline const char* process_name(Process p) {
    switch (p) {
        case Process::coalescing: return "coalescing";
        case Process::voter: return "voter";
        case Process::tokens: return "tokens";
    }
    return "?";
}

inline Process parse_process(const std::string& name) {
    if (name == "coalescing") return Process::coalescing;
    if (name == "voter") return Process::voter;
    if (name == "tokens") return Process::tokens;
    throw ParamError("unknown process '" + name + "'");
}

struct ProcessConfig {
    Process process = Process::coalescing;
    bool lazy = true;
    std::vector<int> starts;    // coalescing/tokens; empty = one particle per vertex
    std::vector<int> opinions;  // voter; empty = all distinct
    long long trials = 1;
    std::uint64_t seed = 1;
    long long step_cap = 0;     // 0 -> 10^7 * n
    int workers = 1;
    bool allow_periodic = false;     // run simple walks on a bipartite graph anyway
    bool record_first_meeting = false;

    long long effective_cap(int n) const {
        return step_cap > 0 ? step_cap : 10000000LL * n;
    }
};

/// Summary of completion steps over the trials. Capped trials are counted
/// separately: `mean` averages completed trials only, `mean_censored` folds
/// capped trials in at the cap value (a lower bound on the truth).
struct SampleStats {
    long long trials = 0;
    long long completed = 0;
    long long capped = 0;
    double mean = std::numeric_limits<double>::quiet_NaN();
    double mean_censored = std::numeric_limits<double>::quiet_NaN();
    double variance = std::numeric_limits<double>::quiet_NaN();
    double std_error = std::numeric_limits<double>::quiet_NaN();
    double ci95_low = std::numeric_limits<double>::quiet_NaN();
    double ci95_high = std::numeric_limits<double>::quiet_NaN();
    long long min_steps = 0;
    long long max_steps = 0;

    struct Bin {
        long long lo = 0;  // inclusive
        long long hi = 0;  // inclusive
        long long count = 0;
    };
    std::vector<Bin> histogram;  // over completed trials, at most 32 bins
};

struct SimOutcome {
    SampleStats completion;
    std::optional<SampleStats> first_meeting;  // coalescing/tokens, when requested
};

namespace detail {

struct TrialResult {
    long long steps = 0;
    bool capped = false;
    long long first_meeting = -1;  // -1 = no meeting before cap
    bool meeting_capped = false;
};

/// One coalescing/token trial: all particles step at once, co-located
/// particles merge. Positions are kept sorted so the trajectory depends only
/// on the trial's own random stream.
inline TrialResult run_coalescing_trial(const Graph& g, const ProcessConfig& cfg,
                                        std::uint64_t trial_index) {
    RngStream rng(cfg.seed, trial_index);
    const int n = g.vertex_count();
    std::vector<int> pos;
    if (cfg.starts.empty()) {
        pos.resize(n);
        for (int v = 0; v < n; ++v) pos[v] = v;
    } else {
        pos = cfg.starts;
        std::sort(pos.begin(), pos.end());
    }
    TrialResult result;
    const std::size_t before = pos.size();
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    if (pos.size() < before) result.first_meeting = 0;
    const long long cap = cfg.effective_cap(n);
    long long step = 0;
    while (pos.size() > 1) {
        if (step >= cap) {
            result.capped = true;
            result.meeting_capped = result.first_meeting < 0;
            break;
        }
        ++step;
        for (int& v : pos) {
            if (cfg.lazy && rng.coin()) continue;
            const auto& nb = g.neighbors(v);
            v = nb[rng.below(static_cast<std::uint64_t>(nb.size()))];
        }
        std::sort(pos.begin(), pos.end());
        const auto last = std::unique(pos.begin(), pos.end());
        if (last != pos.end()) {
            pos.erase(last, pos.end());
            if (result.first_meeting < 0) result.first_meeting = step;
        }
    }
    result.steps = step;
    return result;
}

/// One synchronous opinion trial: every vertex adopts a random neighbor's
/// previous opinion (lazy: keeps its own with probability 1/2).
inline TrialResult run_voter_trial(const Graph& g, const ProcessConfig& cfg,
                                   std::uint64_t trial_index) {
    RngStream rng(cfg.seed, trial_index);
    const int n = g.vertex_count();
    std::vector<int> op(n);
    if (cfg.opinions.empty()) {
        for (int v = 0; v < n; ++v) op[v] = v;
    } else {
        op = cfg.opinions;
    }
    std::vector<int> count(n, 0);
    int distinct = 0;
    for (int v = 0; v < n; ++v)
        if (count[op[v]]++ == 0) ++distinct;
    TrialResult result;
    const long long cap = cfg.effective_cap(n);
    long long step = 0;
    std::vector<int> next(n);
    while (distinct > 1) {
        if (step >= cap) {
            result.capped = true;
            break;
        }
        ++step;
        for (int v = 0; v < n; ++v) {
            if (cfg.lazy && rng.coin()) {
                next[v] = op[v];
                continue;
            }
            const auto& nb = g.neighbors(v);
            next[v] = op[nb[rng.below(static_cast<std::uint64_t>(nb.size()))]];
        }
        for (int v = 0; v < n; ++v) {
            if (next[v] == op[v]) continue;
            if (--count[op[v]] == 0) --distinct;
            if (count[next[v]]++ == 0) ++distinct;
            op[v] = next[v];
        }
    }
    result.steps = step;
    return result;
}

inline SampleStats summarize(const std::vector<long long>& values,
                             const std::vector<bool>& was_capped) {
    SampleStats st;
    st.trials = static_cast<long long>(values.size());
    double sum = 0.0, sum_all = 0.0;
    long long lo = std::numeric_limits<long long>::max(), hi = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sum_all += static_cast<double>(values[i]);
        if (was_capped[i]) {
            ++st.capped;
            continue;
        }
        ++st.completed;
        sum += static_cast<double>(values[i]);
        lo = std::min(lo, values[i]);
        hi = std::max(hi, values[i]);
    }
    if (st.trials > 0) st.mean_censored = sum_all / static_cast<double>(st.trials);
    if (st.completed == 0) return st;
    st.mean = sum / static_cast<double>(st.completed);
    st.min_steps = lo;
    st.max_steps = hi;
    if (st.completed > 1) {
        double ss = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (was_capped[i]) continue;
            const double d = static_cast<double>(values[i]) - st.mean;
            ss += d * d;
        }
        st.variance = ss / static_cast<double>(st.completed - 1);
        st.std_error = std::sqrt(st.variance / static_cast<double>(st.completed));
        st.ci95_low = st.mean - 1.96 * st.std_error;
        st.ci95_high = st.mean + 1.96 * st.std_error;
    }
    const long long span = hi - lo + 1;
    const long long bins = std::min<long long>(32, span);
    const long long width = (span + bins - 1) / bins;
    st.histogram.assign(static_cast<std::size_t>((span + width - 1) / width), {});
    for (std::size_t b = 0; b < st.histogram.size(); ++b) {
        st.histogram[b].lo = lo + static_cast<long long>(b) * width;
        st.histogram[b].hi = std::min(hi, st.histogram[b].lo + width - 1);
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (was_capped[i]) continue;
        st.histogram[static_cast<std::size_t>((values[i] - lo) / width)].count += 1;
    }
    return st;
}

template <typename TrialFn>
inline std::vector<TrialResult> run_trials(const ProcessConfig& cfg, TrialFn&& trial) {
    const long long trials = cfg.trials;
    std::vector<TrialResult> results(static_cast<std::size_t>(trials));
    const int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        for (long long i = 0; i < trials; ++i)
            results[static_cast<std::size_t>(i)] = trial(static_cast<std::uint64_t>(i));
        return results;
    }
    std::atomic<long long> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const long long i = cursor.fetch_add(1);
                if (i >= trials) break;
                results[static_cast<std::size_t>(i)] = trial(static_cast<std::uint64_t>(i));
            }
        });
    }
    for (auto& t : pool) t.join();
    return results;
}

}  // namespace detail

inline void validate_config(const Graph& g, const ProcessConfig& cfg) {
    if (cfg.trials < 1) throw ParamError("trial count must be at least 1");
    if (cfg.step_cap < 0) throw ParamError("step cap must be positive");
    for (int v : cfg.starts)
        if (v < 0 || v >= g.vertex_count()) throw ParamError("start vertex out of range");
    if (!cfg.opinions.empty() &&
        static_cast<int>(cfg.opinions.size()) != g.vertex_count())
        throw ParamError("opinion list must cover every vertex");
    for (int o : cfg.opinions)
        if (o < 0 || o >= g.vertex_count()) throw ParamError("opinion label out of range");
    if (!cfg.lazy && g.is_bipartite() && !cfg.allow_periodic)
        throw PeriodicChainError(
            "simple synchronous steps on a bipartite graph can cycle forever; "
            "use the lazy walk or allow capped exploration");
}

inline SimOutcome simulate_coalescing(const Graph& g, const ProcessConfig& cfg) {
    validate_config(g, cfg);
    const auto results = detail::run_trials(
        cfg, [&](std::uint64_t i) { return detail::run_coalescing_trial(g, cfg, i); });
    SimOutcome out;
    std::vector<long long> steps;
    std::vector<bool> capped;
    steps.reserve(results.size());
    capped.reserve(results.size());
    for (const auto& r : results) {
        steps.push_back(r.steps);
        capped.push_back(r.capped);
    }
    out.completion = detail::summarize(steps, capped);
    if (cfg.record_first_meeting) {
        std::vector<long long> meet;
        std::vector<bool> meet_capped;
        meet.reserve(results.size());
        meet_capped.reserve(results.size());
        for (const auto& r : results) {
            meet.push_back(r.first_meeting < 0 ? r.steps : r.first_meeting);
            meet_capped.push_back(r.meeting_capped);
        }
        out.first_meeting = detail::summarize(meet, meet_capped);
    }
    return out;
}

inline SimOutcome simulate_tokens(const Graph& g, const ProcessConfig& cfg) {
    if (cfg.starts.empty()) throw ParamError("token placement must be nonempty");
    return simulate_coalescing(g, cfg);
}

inline SampleStats simulate_voter(const Graph& g, const ProcessConfig& cfg) {
    validate_config(g, cfg);
    const auto results = detail::run_trials(
        cfg, [&](std::uint64_t i) { return detail::run_voter_trial(g, cfg, i); });
    std::vector<long long> steps;
    std::vector<bool> capped;
    steps.reserve(results.size());
    capped.reserve(results.size());
    for (const auto& r : results) {
        steps.push_back(r.steps);
        capped.push_back(r.capped);
    }
    return detail::summarize(steps, capped);
}

inline SimOutcome simulate(const Graph& g, const ProcessConfig& cfg) {
    switch (cfg.process) {
        case Process::coalescing: return simulate_coalescing(g, cfg);
        case Process::tokens: return simulate_tokens(g, cfg);
        case Process::voter: {
            SimOutcome out;
            out.completion = simulate_voter(g, cfg);
            return out;
        }
    }
    throw ParamError("unknown process");
}

/// Empirical Pr(a walk from `start` avoids `target` through step t).
struct SurvivalEstimate {
    double probability = 0.0;
    double std_error = 0.0;
    long long trials = 0;
};

inline SurvivalEstimate estimate_survival(const Graph& g, bool lazy, int target,
                                          int start, long long t, long long trials,
                                          std::uint64_t seed) {
    if (target < 0 || target >= g.vertex_count() || start < 0 ||
        start >= g.vertex_count())
        throw ParamError("vertex out of range");
    if (trials < 1) throw ParamError("trial count must be at least 1");
    long long survived = 0;
    for (long long i = 0; i < trials; ++i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        int v = start;
        bool alive = v != target;
        for (long long s = 0; alive && s < t; ++s) {
            if (lazy && rng.coin()) continue;
            const auto& nb = g.neighbors(v);
            v = nb[rng.below(static_cast<std::uint64_t>(nb.size()))];
            if (v == target) alive = false;
        }
        if (alive) ++survived;
    }
    SurvivalEstimate est;
    est.trials = trials;
    est.probability = static_cast<double>(survived) / static_cast<double>(trials);
    est.std_error =
        std::sqrt(est.probability * (1.0 - est.probability) / static_cast<double>(trials));
    return est;
}

inline nlohmann::ordered_json to_json(const SampleStats& st) {
    nlohmann::ordered_json j;
    j["trials"] = st.trials;
    j["completed"] = st.completed;
    j["capped"] = st.capped;
    auto number_or_null = [](double v) -> nlohmann::ordered_json {
        if (std::isnan(v)) return nullptr;
        return v;
    };
    j["mean"] = number_or_null(st.mean);
    j["mean_censored"] = number_or_null(st.mean_censored);
    j["variance"] = number_or_null(st.variance);
    j["std_error"] = number_or_null(st.std_error);
    j["ci95_low"] = number_or_null(st.ci95_low);
    j["ci95_high"] = number_or_null(st.ci95_high);
    j["min_steps"] = st.min_steps;
    j["max_steps"] = st.max_steps;
    nlohmann::ordered_json bins = nlohmann::ordered_json::array();
    for (const auto& b : st.histogram) {
        nlohmann::ordered_json bin;
        bin["lo"] = b.lo;
        bin["hi"] = b.hi;
        bin["count"] = b.count;
        bins.push_back(bin);
    }
    j["histogram"] = bins;
    return j;
}

}  // namespace coalesce
