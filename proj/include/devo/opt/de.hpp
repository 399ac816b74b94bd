#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "devo/errors.hpp"
#include "devo/rng.hpp"
#include "devo/search_space.hpp"

namespace devo::opt {

/// a strictly better than b, where non-finite values lose to any finite one.
inline bool fitness_better(double a, double b) {
    const bool fa = std::isfinite(a);
    const bool fb = std::isfinite(b);
    if (!fa) return false;
    if (!fb) return true;
    return a < b;
}

struct MutationEvent {
    int r1 = 0, r2 = 0, r3 = 0;  // distinct donors, all != target
    Genome combination;          // r1 + F*(r2 - r3), before any repair
    Genome mutant;               // combination clamped into the box
};

/// rand/1 donor vector for one target. Draws exactly three distinct indices
/// (uniformly, by rejection) and forms base + F * difference.
inline MutationEvent de_mutate(const SearchSpace& space, const std::vector<Genome>& pop,
                               int target, double scaling_factor, RngStream& rng) {
    const int P = static_cast<int>(pop.size());
    if (P < 4)
        throw PopulationTooSmall("rand/1 mutation needs 4 individuals, got " +
                                 std::to_string(P));
    MutationEvent ev;
    int picked[3];
    for (int k = 0; k < 3; ++k) {
        for (;;) {
            const int idx = static_cast<int>(rng.below(static_cast<std::uint64_t>(P)));
            if (idx == target) continue;
            bool dup = false;
            for (int m = 0; m < k; ++m) dup |= (picked[m] == idx);
            if (!dup) {
                picked[k] = idx;
                break;
            }
        }
    }
    ev.r1 = picked[0];
    ev.r2 = picked[1];
    ev.r3 = picked[2];

    const std::size_t D = space.dim();
    ev.combination.resize(D);
    for (std::size_t d = 0; d < D; ++d)
        ev.combination[d] =
            pop[ev.r1][d] + scaling_factor * (pop[ev.r2][d] - pop[ev.r3][d]);
    ev.mutant = repair_clamp(space, ev.combination);
    return ev;
}

struct CrossoverEvent {
    Genome trial;
    std::vector<std::uint8_t> from_mutant;  // per-gene provenance
    std::size_t forced_gene = 0;            // the always-inherited mutant gene
};

/// Binomial crossover: one uniformly chosen gene always comes from the
/// mutant, every other gene comes from the mutant with probability CR.
inline CrossoverEvent de_crossover_binomial(const Genome& target, const Genome& mutant,
                                            double crossover_rate, RngStream& rng) {
    if (target.size() != mutant.size())
        throw DimensionMismatch("crossover operands disagree on dimension");
    const std::size_t D = target.size();
    CrossoverEvent ev;
    ev.trial.resize(D);
    ev.from_mutant.assign(D, 0);
    ev.forced_gene = static_cast<std::size_t>(rng.below(D));
    for (std::size_t d = 0; d < D; ++d) {
        const double u = rng.next_double();
        const bool take = (d == ev.forced_gene) || u < crossover_rate;
        ev.from_mutant[d] = take ? 1 : 0;
        ev.trial[d] = take ? mutant[d] : target[d];
    }
    return ev;
}

/// One-to-one replacement: the trial takes the slot only on strict
/// improvement (or a tie, when allowed). A non-finite trial never wins;
/// nan_trials counts those for diagnostics.
inline bool de_trial_wins(double trial_fitness, double target_fitness, bool select_on_ties,
                          long long* nan_trials = nullptr) {
    if (!std::isfinite(trial_fitness)) {
        if (nan_trials) ++*nan_trials;
        return false;
    }
    if (!std::isfinite(target_fitness)) return true;
    if (trial_fitness < target_fitness) return true;
    return select_on_ties && trial_fitness == target_fitness;
}

}  // namespace devo::opt
