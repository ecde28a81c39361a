// Numerical check of the duality between synchronous pull voting and
// coalescing random walks: on any connected graph the expected time to
// consensus equals the expected time for n coalescing walkers to merge.
// We show it exactly on small graphs and by Monte Carlo on a larger one.

#include <cstdio>

#include "coalesce/exact.hpp"
#include "coalesce/generators.hpp"
#include "coalesce/graph.hpp"
#include "coalesce/montecarlo.hpp"

namespace {

void exact_row(const char* name, const coalesce::Graph& g) {
    const double voter = coalesce::exact_voter_time(g, /*lazy=*/true);
    const double coal = coalesce::exact_coalescence_time(g, /*lazy=*/true);
    std::printf("%-12s %10.6f %10.6f %12.2e\n", name, voter, coal,
                voter - coal);
}

}  // namespace

int main() {
    std::printf("exact (lazy walk):\n");
    std::printf("%-12s %10s %10s %12s\n", "graph", "voter", "coalesce",
                "difference");
    coalesce::FamilySpec k4{coalesce::Family::complete, 4};
    coalesce::FamilySpec p5{coalesce::Family::path, 5};
    coalesce::FamilySpec c6{coalesce::Family::cycle, 6};
    exact_row("complete-4", coalesce::generate(k4, 1));
    exact_row("path-5", coalesce::generate(p5, 1));
    exact_row("cycle-6", coalesce::generate(c6, 1));

    std::printf("\nMonte Carlo (lazy walk, cycle of 24 vertices):\n");
    coalesce::FamilySpec c24{coalesce::Family::cycle, 24};
    const coalesce::Graph g = coalesce::generate(c24, 1);
    for (auto process :
         {coalesce::Process::voter, coalesce::Process::coalescing}) {
        coalesce::ProcessConfig cfg;
        cfg.process = process;
        cfg.lazy = true;
        cfg.trials = 600;
        cfg.seed = 11;
        const coalesce::SimOutcome out = coalesce::simulate(g, cfg);
        std::printf("%-12s mean %10.2f   95%% CI [%.2f, %.2f]\n",
                    coalesce::process_name(process), out.completion.mean,
                    out.completion.ci95_low, out.completion.ci95_high);
    }
    return 0;
}
