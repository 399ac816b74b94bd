#pragma once

#include <vector>

#include "devo/errors.hpp"
#include "devo/opt/de.hpp"  // fitness_better
#include "devo/rng.hpp"
#include "devo/search_space.hpp"

namespace devo::opt {

enum class TournamentMode { select, replace };

/// Tournament over T distinct indices drawn uniformly (rejection sampling).
/// select returns the fittest entrant, replace the least fit; ties keep the
/// earlier draw. excluded, when >= 0, can never enter the tournament.
inline int ga_tournament(const std::vector<double>& fitness, int tournament_size,
                         TournamentMode mode, RngStream& rng, int excluded = -1) {
    const int P = static_cast<int>(fitness.size());
    const int eligible = P - (excluded >= 0 && excluded < P ? 1 : 0);
    if (tournament_size < 1 || tournament_size > eligible)
        throw PopulationTooSmall("tournament of " + std::to_string(tournament_size) +
                                 " cannot be drawn from " + std::to_string(eligible) +
                                 " eligible individuals");
    int winner = -1;
    std::vector<int> drawn;
    drawn.reserve(tournament_size);
    while (static_cast<int>(drawn.size()) < tournament_size) {
        const int idx = static_cast<int>(rng.below(static_cast<std::uint64_t>(P)));
        if (idx == excluded) continue;
        bool dup = false;
        for (int d : drawn) dup |= (d == idx);
        if (dup) continue;
        drawn.push_back(idx);
        if (winner < 0) {
            winner = idx;
        } else if (mode == TournamentMode::select
                       ? fitness_better(fitness[idx], fitness[winner])
                       : fitness_better(fitness[winner], fitness[idx])) {
            winner = idx;
        }
    }
    return winner;
}

/// Whole-arm uniform crossover: with probability X build a child whose genes
/// come from either parent with probability 1/2 each; otherwise the child is
/// a copy of the first parent and no per-gene draws are made.
inline Genome ga_uniform_crossover(const Genome& p1, const Genome& p2,
                                   double crossover_probability, RngStream& rng) {
    if (p1.size() != p2.size())
        throw DimensionMismatch("crossover operands disagree on dimension");
    const double u = rng.next_double();
    if (u >= crossover_probability) return p1;
    Genome child(p1.size());
    for (std::size_t d = 0; d < p1.size(); ++d)
        child[d] = rng.next_double() < 0.5 ? p1[d] : p2[d];
    return child;
}

/// Per-allele mutation: each gene flips with probability mu, moving by a step
/// uniform in +/- step_fraction of that dimension's range, then clamps.
inline Genome ga_mutate(const SearchSpace& space, Genome g, double mutation_rate,
                        double step_fraction, RngStream& rng) {
    space.require_same_dim(g);
    for (std::size_t d = 0; d < g.size(); ++d) {
        const double u = rng.next_double();
        if (u < mutation_rate) {
            const double span = step_fraction * space.width(d);
            g[d] += rng.uniform(-span, span);
            g[d] = std::clamp(g[d], space.lo(d), space.hi(d));
        }
    }
    return g;
}

}  // namespace devo::opt
