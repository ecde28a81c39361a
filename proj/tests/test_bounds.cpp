#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "coalesce/bounds.hpp"
#include "coalesce/generators.hpp"
#include "corpus.hpp"

using coalesce::BoundsReport;
using coalesce::DegreeStats;
using coalesce::ReportOptions;
using coalesce::ReportRow;

namespace {

const ReportRow& find_row(const BoundsReport& rep, const std::string& name) {
    for (const auto& row : rep.rows)
        if (row.name == name) return row;
    FAIL("no report row named " + name);
    throw std::logic_error("unreachable");
}

// Split one CSV line respecting quoted fields.
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

TEST_CASE("walk-count scale") {
    auto ks_of = [](const std::string& name) {
        return coalesce::k_star(coalesce::degree_stats(testutil::find(name).graph));
    };
    CHECK(ks_of("complete-4") == 2);
    CHECK(ks_of("star-5") == 2);
    CHECK(ks_of("cycle-4") == 2);
    const coalesce::FamilySpec star16{coalesce::Family::star, 16};
    CHECK(coalesce::k_star(coalesce::degree_stats(coalesce::generate(star16, 1))) == 2);

    // Large sparse regular case, stats assembled by hand: the log term rules.
    DegreeStats ds;
    ds.n = 1000;
    ds.m = 1500;
    ds.min_degree = ds.max_degree = 3;
    ds.sum_sq_degrees = 9000;
    ds.avg_degree = 3.0;
    ds.nu = 1.0;
    CHECK(coalesce::k_star(ds) == 6);
}

TEST_CASE("bracket values on the four-clique") {
    const auto& g = testutil::find("complete-4").graph;
    const auto spec = coalesce::spectrum(coalesce::walk_chain(g, true));
    const auto ds = coalesce::degree_stats(g);
    const auto b = coalesce::bound_values(g, spec, ds, 2);
    const double log4 = std::log(4.0);
    const double gap = 2.0 / 3.0;
    CHECK(b.gamma_hit_nu_form == Catch::Approx(12.0));
    CHECK(b.coalesce_polylog == Catch::Approx((std::pow(log4, 4) + 4.0) / gap));
    CHECK(b.coalesce_edge_form == Catch::Approx(std::pow(2.0 * log4, 2) / gap));
    CHECK(b.meeting_k_form == Catch::Approx((2.0 * log4 + 1.0) / gap));
    CHECK(b.coalesce_k_form == Catch::Approx((4.0 * log4 + 4.0) / gap));

    CHECK_THROWS_AS(coalesce::bound_values(g, spec, ds, 1), coalesce::ParamError);
    const auto simple = coalesce::spectrum(coalesce::walk_chain(g, false));
    CHECK_THROWS_AS(coalesce::bound_values(g, simple, ds, 2), coalesce::ParamError);
}

TEST_CASE("avoidance decay bound") {
    CHECK(coalesce::avoidance_bound(5.0, 4.0, 2.0) == 1.0);  // floor(5/10) = 0
    CHECK(coalesce::avoidance_bound(20.0, 4.0, 2.0) == Catch::Approx(std::exp(-2.0)));
    CHECK(coalesce::avoidance_bound(10.0, 4.0, 2.0) == Catch::Approx(std::exp(-1.0)));
    CHECK(coalesce::avoidance_bound(0.0, 0.0, 0.0) == 1.0);
    CHECK_THROWS_AS(coalesce::avoidance_bound(-1.0, 4.0, 2.0), coalesce::ParamError);
    CHECK_THROWS_AS(coalesce::avoidance_bound(1.0, -4.0, 2.0), coalesce::ParamError);
}

TEST_CASE("halving time scale") {
    const auto& g = testutil::find("complete-4").graph;
    const auto spec = coalesce::spectrum(coalesce::walk_chain(g, true));
    const auto ds = coalesce::degree_stats(g);

    const auto exact = coalesce::t_star(g, spec, ds);
    CHECK(exact.k == 2);
    CHECK(exact.t_mix_exact);
    CHECK(exact.gamma_hit_exact);
    CHECK(exact.log_factor == Catch::Approx(std::log(4.0)));
    CHECK(exact.value ==
          Catch::Approx(2.0 * std::log(4.0) * (exact.t_mix_gamma + 3.0 * exact.gamma_hit)));
    CHECK(exact.gamma_hit == Catch::Approx(3.375));  // every pair meets in 4.5

    // Tiny state cap: both factors fall back to surrogates.
    const auto rough = coalesce::t_star(g, spec, ds, 10);
    CHECK_FALSE(rough.t_mix_exact);
    CHECK_FALSE(rough.gamma_hit_exact);
    CHECK(rough.gamma_hit == Catch::Approx(12.0));
    CHECK(rough.t_mix_gamma ==
          Catch::Approx(2.0 * static_cast<double>(
                                  coalesce::mixing_time(coalesce::walk_chain(g, true)))));
}

TEST_CASE("four-clique report") {
    ReportOptions opt;
    opt.mc_trials = 500;
    const BoundsReport rep = coalesce::make_report(testutil::find("complete-4").graph, opt);
    CHECK(rep.all_literal_pass());
    CHECK(rep.meta["vertices"] == 4);
    CHECK(rep.meta["lazy"] == true);

    CHECK(find_row(rep, "k_star").measured == 2.0);
    CHECK(find_row(rep, "spectral_gap").measured == Catch::Approx(2.0 / 3.0));

    const auto& merged = find_row(rep, "merged_hit_cap");
    REQUIRE(merged.measured.has_value());
    CHECK(*merged.measured == Catch::Approx(3.375));
    CHECK(*merged.bound == Catch::Approx(6.0));  // 1/(pi_merged * gap) = 1/(0.25 * 2/3)
    CHECK(merged.pass == true);

    const auto& nu_form = find_row(rep, "merged_hit_vs_nu_form");
    CHECK(*nu_form.measured == Catch::Approx(3.375));
    CHECK(*nu_form.bound == Catch::Approx(12.0));
    CHECK(*nu_form.ratio == Catch::Approx(3.375 / 12.0));
    CHECK_FALSE(nu_form.pass.has_value());

    const auto& match = find_row(rep, "consensus_coalescence_match");
    REQUIRE(match.pass.has_value());
    CHECK(*match.pass);
    CHECK(*match.measured <= 1e-8);

    const auto& sum_row = find_row(rep, "coalescence_vs_meeting_sum");
    REQUIRE(sum_row.pass.has_value());
    CHECK(*sum_row.pass);
    CHECK(*sum_row.measured == Catch::Approx(coalesce::exact_coalescence_time(
                                   testutil::find("complete-4").graph, true)));

    CHECK(find_row(rep, "t_star").note.find("measured on the collapsed chain") !=
          std::string::npos);
    CHECK(find_row(rep, "avoidance_decay").pass == true);
}

TEST_CASE("periodic-walk report annotates instead of failing") {
    ReportOptions opt;
    opt.lazy = false;
    const BoundsReport rep = coalesce::make_report(testutil::find("cycle-4").graph, opt);
    CHECK(rep.all_literal_pass());

    const auto& mix = find_row(rep, "mixing_time");
    CHECK_FALSE(mix.measured.has_value());
    CHECK(mix.note.find("periodic") != std::string::npos);

    CHECK(find_row(rep, "avoidance_decay").note.find("skipped") != std::string::npos);
    CHECK(find_row(rep, "merged_hit_cap").note.find("unreachable") != std::string::npos);
    CHECK_FALSE(find_row(rep, "merged_hit_cap").pass.has_value());

    const auto& polylog = find_row(rep, "coalescence_vs_polylog_form");
    CHECK_FALSE(polylog.bound.has_value());
    CHECK(polylog.note.find("lazy") != std::string::npos);

    const auto& pair_row = find_row(rep, "pair_meeting_vs_k_form");
    CHECK_FALSE(pair_row.measured.has_value());
    CHECK(pair_row.note.find("unreachable") != std::string::npos);

    // Literal rows that do apply still pass.
    CHECK(find_row(rep, "spectral_gap_floor").pass == true);
    CHECK(find_row(rep, "hitting_max_sandwich").pass == true);
    CHECK(find_row(rep, "z_diagonal_cap").pass == true);
    CHECK(find_row(rep, "collision_mass_floor").pass == true);
}

TEST_CASE("every corpus graph passes its literal rows") {
    ReportOptions opt;
    opt.mc_trials = 200;
    for (const auto& entry : testutil::corpus_up_to(12)) {
        INFO(entry.name);
        const BoundsReport rep = coalesce::make_report(entry.graph, opt);
        for (const auto& row : rep.rows) {
            INFO(row.name << " note: " << row.note);
            if (row.kind == "literal" && row.pass.has_value()) CHECK(*row.pass);
            if (row.kind == "ratio" && row.ratio.has_value()) {
                CHECK(*row.ratio > 0.0);
                CHECK(std::isfinite(*row.ratio));
            }
        }
        CHECK(rep.all_literal_pass());
    }
}

TEST_CASE("reports are deterministic") {
    ReportOptions opt;
    opt.mc_trials = 300;
    const auto& g = testutil::find("random-regular-10-3").graph;
    const auto a = coalesce::make_report(g, opt);
    const auto b = coalesce::make_report(g, opt);
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(a.to_csv() == b.to_csv());
}

TEST_CASE("csv layout") {
    ReportOptions opt;
    opt.mc_trials = 100;
    const auto rep = coalesce::make_report(testutil::find("complete-4").graph, opt);
    std::istringstream csv(rep.to_csv());
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "name,kind,relation,measured,measured_se,bound,ratio,pass,expression,note");
    std::size_t rows = 0;
    while (std::getline(csv, line)) {
        const auto fields = split_csv(line);
        INFO(line);
        CHECK(fields.size() == 10);
        ++rows;
    }
    CHECK(rows == rep.rows.size());
}

TEST_CASE("literal verdict aggregation") {
    BoundsReport rep;
    ReportRow ok;
    ok.kind = "literal";
    ok.pass = true;
    ReportRow skipped;
    skipped.kind = "literal";  // pass unset: row was skipped, not failed
    ReportRow ratio;
    ratio.kind = "ratio";
    rep.rows = {ok, skipped, ratio};
    CHECK(rep.all_literal_pass());
    ReportRow bad;
    bad.kind = "literal";
    bad.pass = false;
    rep.rows.push_back(bad);
    CHECK_FALSE(rep.all_literal_pass());
}
