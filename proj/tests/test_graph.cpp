#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>
#include <string>

#include "coalesce/generators.hpp"
#include "coalesce/graph.hpp"
#include "corpus.hpp"

using coalesce::DegreeStats;
using coalesce::Family;
using coalesce::FamilySpec;
using coalesce::Graph;

TEST_CASE("edge construction normalizes and deduplicates") {
    const Graph g = Graph::from_edges({{1, 0}, {0, 1}, {1, 2}, {2, 0}});
    CHECK(g.vertex_count() == 3);
    CHECK(g.edge_count() == 3);
    CHECK(g.to_edge_list() == "0 1\n0 2\n1 2\n");
    CHECK(g.degree(0) == 2);
    CHECK(g.neighbors(1) == std::vector<int>{0, 2});
}

TEST_CASE("invalid edge lists are rejected") {
    CHECK_THROWS_AS(Graph::from_edges({{0, 0}}), coalesce::Error);
    CHECK_THROWS_AS(Graph::from_edges({{-1, 2}}), coalesce::Error);
    CHECK_THROWS_AS(Graph::from_edges({}), coalesce::Error);
    CHECK_THROWS_AS(Graph::from_edges({{0, 1}, {2, 3}}), coalesce::DisconnectedError);
    // isolated vertex via explicit n
    CHECK_THROWS_AS(Graph::from_edges({{0, 1}}, 3), coalesce::DisconnectedError);
}

TEST_CASE("edge-list text parsing") {
    const std::string text =
        "# triangle\n"
        "\n"
        "0 1\n"
        "  1 2   \n"
        "0 2  # closing edge\n";
    const Graph g = coalesce::load_edge_list(text);
    CHECK(g.vertex_count() == 3);
    CHECK(g.edge_count() == 3);

    CHECK_THROWS_AS(coalesce::load_edge_list(std::string{"0\n"}), coalesce::ParseError);
    CHECK_THROWS_AS(coalesce::load_edge_list(std::string{"0 1 junk\n"}),
                    coalesce::ParseError);
    CHECK_THROWS_AS(coalesce::load_edge_list(std::string{"0 0\n"}), coalesce::ParseError);
    CHECK_THROWS_AS(coalesce::load_edge_list(std::string{"# only comments\n"}),
                    coalesce::Error);
    try {
        coalesce::load_edge_list(std::string{"0 1\nbroken\n"});
        FAIL("expected a parse error");
    } catch (const coalesce::ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("edge-list round trip") {
    for (const auto& entry : testutil::corpus()) {
        const Graph reloaded = coalesce::load_edge_list(entry.graph.to_edge_list());
        CHECK(reloaded.to_edge_list() == entry.graph.to_edge_list());
    }
}

TEST_CASE("degree statistics") {
    FamilySpec k4{Family::complete, 4};
    const DegreeStats s4 = coalesce::degree_stats(coalesce::generate(k4, 1));
    CHECK(s4.n == 4);
    CHECK(s4.m == 6);
    CHECK(s4.min_degree == 3);
    CHECK(s4.max_degree == 3);
    CHECK(s4.sum_sq_degrees == 36);
    CHECK(s4.avg_degree == Catch::Approx(3.0));
    CHECK(s4.nu == Catch::Approx(1.0));

    FamilySpec star16{Family::star, 16};
    const DegreeStats st = coalesce::degree_stats(coalesce::generate(star16, 1));
    CHECK(st.m == 15);
    CHECK(st.min_degree == 1);
    CHECK(st.max_degree == 15);
    CHECK(st.sum_sq_degrees == 15 * 15 + 15);
    CHECK(st.nu == Catch::Approx(16.0 * 240.0 / 900.0));
}

TEST_CASE("bipartiteness detection") {
    auto make = [](Family f, int n) {
        FamilySpec spec;
        spec.family = f;
        spec.n = n;
        return coalesce::generate(spec, 1);
    };
    CHECK(make(Family::cycle, 4).is_bipartite());
    CHECK(make(Family::cycle, 6).is_bipartite());
    CHECK_FALSE(make(Family::cycle, 5).is_bipartite());
    CHECK(make(Family::path, 7).is_bipartite());
    CHECK(make(Family::star, 9).is_bipartite());
    CHECK_FALSE(make(Family::complete, 3).is_bipartite());
    CHECK(make(Family::complete, 2).is_bipartite());
}

TEST_CASE("family parsing") {
    CHECK(coalesce::parse_family("random-regular") == Family::random_regular);
    CHECK(coalesce::parse_family("random_regular") == Family::random_regular);
    CHECK(coalesce::parse_family("erdos-renyi") == Family::erdos_renyi);
    CHECK_FALSE(coalesce::parse_family("nonesuch").has_value());
    CHECK(std::string(coalesce::family_name(Family::power_law)) == "power-law");
}

TEST_CASE("generator parameter validation") {
    auto gen = [](Family f, int n, int r = 0, double alpha = 0.0, double p = 0.0) {
        FamilySpec spec;
        spec.family = f;
        spec.n = n;
        spec.r = r;
        spec.alpha = alpha;
        spec.p = p;
        return coalesce::generate(spec, 1);
    };
    CHECK_THROWS_AS(gen(Family::complete, 1), coalesce::ParamError);
    CHECK_THROWS_AS(gen(Family::cycle, 2), coalesce::ParamError);
    CHECK_THROWS_AS(gen(Family::path, 1), coalesce::ParamError);
    CHECK_THROWS_AS(gen(Family::star, 1), coalesce::ParamError);
    CHECK_THROWS_AS(gen(Family::dumbbell, 3), coalesce::ParamError);
    CHECK_THROWS_AS(gen(Family::random_regular, 9, 3), coalesce::ParamError);  // odd r*n
    CHECK_THROWS_AS(gen(Family::random_regular, 4, 4), coalesce::ParamError);  // r >= n
    CHECK_THROWS_AS(gen(Family::power_law, 100, 0, 3.5), coalesce::ParamError);
    CHECK_THROWS_AS(gen(Family::power_law, 8, 0, 2.5), coalesce::ParamError);  // too small
    CHECK_THROWS_AS(gen(Family::erdos_renyi, 12, 0, 0.0, 1.5), coalesce::ParamError);
}

TEST_CASE("generated family shapes") {
    FamilySpec star{Family::star, 16};
    const Graph s = coalesce::generate(star, 1);
    CHECK(s.edge_count() == 15);
    CHECK(s.degree(0) == 15);

    FamilySpec cyc{Family::cycle, 8};
    const Graph c = coalesce::generate(cyc, 1);
    CHECK(c.edge_count() == 8);
    for (int v = 0; v < 8; ++v) CHECK(c.degree(v) == 2);

    FamilySpec rr;
    rr.family = Family::random_regular;
    rr.n = 12;
    rr.r = 3;
    const Graph reg = coalesce::generate(rr, 7);
    for (int v = 0; v < reg.vertex_count(); ++v) CHECK(reg.degree(v) == 3);

    FamilySpec db{Family::dumbbell, 16};
    const Graph d = coalesce::generate(db, 1);
    CHECK(d.vertex_count() == 16);
    CHECK(d.degree(1) == 3);  // clique vertex: 3 clique neighbors

    FamilySpec pl;
    pl.family = Family::power_law;
    pl.n = 100;
    pl.alpha = 2.5;
    const Graph p = coalesce::generate(pl, 3);
    const DegreeStats ps = coalesce::degree_stats(p);
    CHECK(ps.min_degree >= 3);
    CHECK(ps.max_degree > ps.min_degree);
}

TEST_CASE("generation is deterministic in the seed") {
    FamilySpec er;
    er.family = Family::erdos_renyi;
    er.n = 16;
    er.p = 0.35;
    const Graph a = coalesce::generate(er, 11);
    const Graph b = coalesce::generate(er, 11);
    const Graph c = coalesce::generate(er, 12);
    CHECK(a.to_edge_list() == b.to_edge_list());
    CHECK(a.to_edge_list() != c.to_edge_list());
}

TEST_CASE("corpus covers every family with 50+ graphs under 30 vertices") {
    const auto& corpus = testutil::corpus();
    CHECK(corpus.size() >= 50);
    auto family_prefix = [](std::string name) {
        // strip trailing "-<digits>" segments: "random-regular-8-3" -> family
        while (true) {
            const auto cut = name.find_last_of('-');
            if (cut == std::string::npos) return name;
            const std::string tail = name.substr(cut + 1);
            if (tail.empty() ||
                tail.find_first_not_of("0123456789") != std::string::npos)
                return name;
            name.resize(cut);
        }
    };
    std::set<std::string> names;
    std::set<std::string> prefixes;
    for (const auto& entry : corpus) {
        CHECK(entry.graph.vertex_count() <= 30);
        CHECK(entry.graph.vertex_count() >= 2);
        names.insert(entry.name);
        prefixes.insert(family_prefix(entry.name));
    }
    CHECK(names.size() == corpus.size());
    for (const char* family :
         {"complete", "cycle", "path", "star", "dumbbell", "random-regular",
          "power-law", "erdos-renyi"})
        CHECK(prefixes.count(family) == 1);
}
