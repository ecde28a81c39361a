#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "coalesce/exact.hpp"
#include "coalesce/generators.hpp"
#include "coalesce/montecarlo.hpp"
#include "corpus.hpp"

using coalesce::ProcessConfig;
using coalesce::SampleStats;

namespace {

ProcessConfig base_config(coalesce::Process p, long long trials, std::uint64_t seed) {
    ProcessConfig cfg;
    cfg.process = p;
    cfg.trials = trials;
    cfg.seed = seed;
    return cfg;
}

void check_within_3se(const SampleStats& st, double exact) {
    REQUIRE(st.capped == 0);
    REQUIRE(st.std_error > 0.0);
    INFO("mean " << st.mean << " exact " << exact << " se " << st.std_error);
    CHECK(std::abs(st.mean - exact) <= 3.0 * st.std_error);
}

}  // namespace

TEST_CASE("worker count never changes the numbers") {
    const auto& g = testutil::find("random-regular-10-3").graph;
    auto cfg = base_config(coalesce::Process::coalescing, 500, 42);
    cfg.record_first_meeting = true;
    cfg.workers = 1;
    const auto seq = coalesce::simulate(g, cfg);
    cfg.workers = 4;
    const auto par = coalesce::simulate(g, cfg);
    CHECK(coalesce::to_json(seq.completion).dump() ==
          coalesce::to_json(par.completion).dump());
    REQUIRE(seq.first_meeting.has_value());
    REQUIRE(par.first_meeting.has_value());
    CHECK(coalesce::to_json(*seq.first_meeting).dump() ==
          coalesce::to_json(*par.first_meeting).dump());
}

TEST_CASE("seeds are reproducible and distinct") {
    const auto& g = testutil::find("cycle-6").graph;
    const auto a = coalesce::simulate(g, base_config(coalesce::Process::coalescing, 300, 9));
    const auto b = coalesce::simulate(g, base_config(coalesce::Process::coalescing, 300, 9));
    const auto c = coalesce::simulate(g, base_config(coalesce::Process::coalescing, 300, 10));
    CHECK(coalesce::to_json(a.completion).dump() == coalesce::to_json(b.completion).dump());
    CHECK(coalesce::to_json(a.completion).dump() != coalesce::to_json(c.completion).dump());
}

TEST_CASE("sampling agrees with the exact solvers") {
    const auto& k4 = testutil::find("complete-4").graph;
    check_within_3se(
        coalesce::simulate(k4, base_config(coalesce::Process::coalescing, 3000, 1)).completion,
        coalesce::exact_coalescence_time(k4, true));

    const auto& c5 = testutil::find("cycle-5").graph;
    check_within_3se(
        coalesce::simulate(c5, base_config(coalesce::Process::coalescing, 3000, 2)).completion,
        coalesce::exact_coalescence_time(c5, true));

    const auto& p4 = testutil::find("path-4").graph;
    check_within_3se(
        coalesce::simulate(p4, base_config(coalesce::Process::voter, 3000, 3)).completion,
        coalesce::exact_voter_time(p4, true));

    // Simple (non-lazy) dynamics on an odd structure.
    const auto& k3 = testutil::find("complete-3").graph;
    auto simple = base_config(coalesce::Process::coalescing, 3000, 4);
    simple.lazy = false;
    check_within_3se(coalesce::simulate(k3, simple).completion,
                     coalesce::exact_coalescence_time(k3, false));

    // Two tokens on star leaves vs the exact pair meeting time.
    const auto& s5 = testutil::find("star-5").graph;
    auto tok = base_config(coalesce::Process::tokens, 3000, 5);
    tok.starts = {1, 2};
    check_within_3se(coalesce::simulate(s5, tok).completion,
                     coalesce::exact_meeting_time(s5, {1, 2}, true));
}

TEST_CASE("empirical avoidance matches the dense recursion") {
    const auto& c5 = testutil::find("cycle-5").graph;
    const double exact = coalesce::survival_probability(c5, true, 0, 2, 10);
    const auto est = coalesce::estimate_survival(c5, true, 0, 2, 10, 4000, 7);
    CHECK(est.trials == 4000);
    CHECK(std::abs(est.probability - exact) <= 4.0 * est.std_error);
    CHECK_THROWS_AS(coalesce::estimate_survival(c5, true, 0, 2, 10, 0, 7),
                    coalesce::ParamError);
}

TEST_CASE("capped runs are reported, not averaged in") {
    const auto& p8 = testutil::find("path-8").graph;
    auto cfg = base_config(coalesce::Process::coalescing, 50, 1);
    cfg.step_cap = 1;  // eight particles cannot merge to one in a single step
    const auto st = coalesce::simulate(p8, cfg).completion;
    CHECK(st.trials == 50);
    CHECK(st.completed == 0);
    CHECK(st.capped == 50);
    CHECK(std::isnan(st.mean));
    CHECK(st.mean_censored == Catch::Approx(1.0));
    CHECK(st.histogram.empty());
    const auto j = coalesce::to_json(st);
    CHECK(j["mean"].is_null());
    CHECK(j["mean_censored"].get<double>() == Catch::Approx(1.0));
}

TEST_CASE("first-meeting recording") {
    const auto& g = testutil::find("random-regular-8-3").graph;
    auto cfg = base_config(coalesce::Process::coalescing, 400, 6);
    cfg.record_first_meeting = true;
    const auto out = coalesce::simulate(g, cfg);
    REQUIRE(out.first_meeting.has_value());
    CHECK(out.first_meeting->mean <= out.completion.mean);
    CHECK(out.first_meeting->capped == 0);

    // With exactly two walks, completion *is* the first meeting.
    cfg.starts = {0, 5};
    const auto pair = coalesce::simulate(g, cfg);
    REQUIRE(pair.first_meeting.has_value());
    CHECK(coalesce::to_json(*pair.first_meeting).dump() ==
          coalesce::to_json(pair.completion).dump());

    // Duplicated starts meet at time zero.
    cfg.starts = {3, 3};
    const auto dup = coalesce::simulate(g, cfg);
    CHECK(dup.completion.mean == 0.0);
    REQUIRE(dup.first_meeting.has_value());
    CHECK(dup.first_meeting->mean == 0.0);
}

TEST_CASE("token runs are coalescing runs") {
    const auto& g = testutil::find("cycle-7").graph;
    auto cfg = base_config(coalesce::Process::tokens, 500, 8);
    cfg.starts = {0, 2, 5};
    const auto tok = coalesce::simulate(g, cfg);
    cfg.process = coalesce::Process::coalescing;
    const auto coal = coalesce::simulate(g, cfg);
    CHECK(coalesce::to_json(tok.completion).dump() ==
          coalesce::to_json(coal.completion).dump());

    cfg.process = coalesce::Process::tokens;
    cfg.starts = {};
    CHECK_THROWS_AS(coalesce::simulate(g, cfg), coalesce::ParamError);
}

TEST_CASE("settled opinions finish immediately") {
    const auto& g = testutil::find("path-4").graph;
    auto cfg = base_config(coalesce::Process::voter, 20, 1);
    cfg.opinions = {2, 2, 2, 2};
    const auto st = coalesce::simulate(g, cfg).completion;
    CHECK(st.completed == 20);
    CHECK(st.mean == 0.0);
    CHECK(st.max_steps == 0);
}

TEST_CASE("configuration validation") {
    const auto& g = testutil::find("path-4").graph;
    auto cfg = base_config(coalesce::Process::voter, 10, 1);
    cfg.opinions = {0, 1};  // wrong length
    CHECK_THROWS_AS(coalesce::simulate(g, cfg), coalesce::ParamError);
    cfg.opinions = {0, 1, 2, 9};  // label out of range
    CHECK_THROWS_AS(coalesce::simulate(g, cfg), coalesce::ParamError);
    cfg.opinions.clear();
    cfg.trials = 0;
    CHECK_THROWS_AS(coalesce::simulate(g, cfg), coalesce::ParamError);
    cfg.trials = 10;
    cfg.process = coalesce::Process::coalescing;
    cfg.starts = {0, 17};
    CHECK_THROWS_AS(coalesce::simulate(g, cfg), coalesce::ParamError);
    CHECK_THROWS_AS(coalesce::parse_process("percolation"), coalesce::ParamError);
    CHECK(cfg.effective_cap(4) == 40000000LL);
    cfg.step_cap = 123;
    CHECK(cfg.effective_cap(4) == 123);
}

TEST_CASE("periodic dynamics need an explicit opt-in") {
    const auto& c4 = testutil::find("cycle-4").graph;
    auto cfg = base_config(coalesce::Process::coalescing, 30, 1);
    cfg.lazy = false;
    cfg.starts = {0, 1};  // opposite colors: these walks can never meet
    CHECK_THROWS_AS(coalesce::simulate(c4, cfg), coalesce::PeriodicChainError);
    cfg.allow_periodic = true;
    cfg.step_cap = 50;
    const auto st = coalesce::simulate(c4, cfg).completion;
    CHECK(st.completed == 0);
    CHECK(st.capped == 30);
}

TEST_CASE("histograms partition the completed trials") {
    const auto& g = testutil::find("complete-5").graph;
    const auto st =
        coalesce::simulate(g, base_config(coalesce::Process::coalescing, 2000, 11)).completion;
    REQUIRE(!st.histogram.empty());
    CHECK(st.histogram.size() <= 32);
    long long total = 0;
    CHECK(st.histogram.front().lo == st.min_steps);
    CHECK(st.histogram.back().hi == st.max_steps);
    for (std::size_t b = 0; b < st.histogram.size(); ++b) {
        const auto& bin = st.histogram[b];
        CHECK(bin.lo <= bin.hi);
        if (b > 0) CHECK(bin.lo == st.histogram[b - 1].hi + 1);
        total += bin.count;
    }
    CHECK(total == st.completed);
}
