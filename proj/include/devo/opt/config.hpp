#pragma once

#include "devo/errors.hpp"

namespace devo::opt {

/// rand/1/bin differential evolution, generational with one-to-one
/// replacement.
struct DEConfig {
    int population_size = 20;
    double scaling_factor = 0.5;   // F
    double crossover_rate = 0.9;   // CR
    /// Strict improvement by default; when set, a trial that exactly ties its
    /// target also replaces it.
    bool select_on_ties = false;

    void validate() const {
        if (population_size < 4)
            throw PopulationTooSmall(
                "differential evolution needs at least 4 individuals, got " +
                std::to_string(population_size));
        if (!(scaling_factor > 0.0))
            throw ConfigError("scaling factor must be positive");
        if (crossover_rate < 0.0 || crossover_rate > 1.0)
            throw ConfigError("crossover rate must lie in [0,1]");
    }
};

/// Steady-state genetic algorithm: tournament parents, uniform crossover,
/// per-allele mutation, tournament replacement that spares the current best.
struct GAConfig {
    int population_size = 20;
    int tournament_size = 2;
    double crossover_probability = 0.8;   // per mating event
    double mutation_rate = 0.2;           // per allele
    double mutation_step_fraction = 0.05;  // step drawn in +/- this times the range

    void validate() const {
        if (population_size < 2)
            throw PopulationTooSmall("steady state needs at least 2 individuals, got " +
                                     std::to_string(population_size));
        if (tournament_size < 1) throw ConfigError("tournament size must be at least 1");
        if (tournament_size > population_size)
            throw PopulationTooSmall("tournament size exceeds the population");
        if (crossover_probability < 0.0 || crossover_probability > 1.0)
            throw ConfigError("crossover probability must lie in [0,1]");
        if (mutation_rate < 0.0 || mutation_rate > 1.0)
            throw ConfigError("mutation rate must lie in [0,1]");
        if (mutation_step_fraction < 0.0)
            throw ConfigError("mutation step fraction must be non-negative");
    }
};

}  // namespace devo::opt
