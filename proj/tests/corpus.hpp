// Deterministic graph corpus shared by the unit tests and the acceptance
// runner: every generator family, 50+ connected graphs, all within 30
// vertices. Seeds are fixed so each build sees the same graphs.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "coalesce/generators.hpp"
#include "coalesce/graph.hpp"

namespace testutil {

struct NamedGraph {
    std::string name;
    coalesce::Graph graph;
};

inline const std::vector<NamedGraph>& corpus() {
    static const std::vector<NamedGraph> graphs = [] {
        using coalesce::Family;
        using coalesce::FamilySpec;
        std::vector<NamedGraph> out;
        auto add = [&](const std::string& name, Family family, int n, int r = 0,
                       double alpha = 0.0, double p = 0.0, std::uint64_t seed = 1) {
            FamilySpec spec;
            spec.family = family;
            spec.n = n;
            spec.r = r;
            spec.alpha = alpha;
            spec.p = p;
            out.push_back({name, coalesce::generate(spec, seed)});
        };
        for (int n = 2; n <= 9; ++n)
            add("complete-" + std::to_string(n), Family::complete, n);
        for (int n = 3; n <= 12; ++n)
            add("cycle-" + std::to_string(n), Family::cycle, n);
        for (int n = 2; n <= 9; ++n)
            add("path-" + std::to_string(n), Family::path, n);
        for (int n = 4; n <= 11; ++n)
            add("star-" + std::to_string(n), Family::star, n);
        for (int n : {8, 12, 16, 20})
            add("dumbbell-" + std::to_string(n), Family::dumbbell, n);
        add("random-regular-8-3", Family::random_regular, 8, 3);
        add("random-regular-10-3", Family::random_regular, 10, 3);
        add("random-regular-12-4", Family::random_regular, 12, 4);
        add("random-regular-14-3", Family::random_regular, 14, 3);
        add("random-regular-16-4", Family::random_regular, 16, 4);
        add("random-regular-20-3", Family::random_regular, 20, 3);
        // The power-law generator sizes itself from its degree sequence; these
        // scale requests come out between 12 and 27 vertices.
        add("power-law-64", Family::power_law, 64, 0, 2.5);
        add("power-law-100", Family::power_law, 100, 0, 2.5);
        add("power-law-121", Family::power_law, 121, 0, 2.5);
        add("power-law-144", Family::power_law, 144, 0, 2.5);
        add("erdos-renyi-12", Family::erdos_renyi, 12, 0, 0.0, 0.45);
        add("erdos-renyi-16", Family::erdos_renyi, 16, 0, 0.0, 0.35);
        add("erdos-renyi-20", Family::erdos_renyi, 20, 0, 0.0, 0.30);
        add("erdos-renyi-24", Family::erdos_renyi, 24, 0, 0.0, 0.25);
        return out;
    }();
    return graphs;
}

inline std::vector<NamedGraph> corpus_up_to(int max_n) {
    std::vector<NamedGraph> out;
    for (const auto& entry : corpus())
        if (entry.graph.vertex_count() <= max_n) out.push_back(entry);
    return out;
}

inline const NamedGraph& find(const std::string& name) {
    for (const auto& entry : corpus())
        if (entry.name == name) return entry;
    throw std::runtime_error("no corpus graph named " + name);
}

}  // namespace testutil
