#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "devo/diversity.hpp"
#include "devo/errors.hpp"
#include "devo/objectives/objective.hpp"
#include "devo/opt/config.hpp"
#include "devo/opt/de.hpp"
#include "devo/opt/ga.hpp"
#include "devo/opt/runlog.hpp"
#include "devo/parallel.hpp"
#include "devo/rng.hpp"
#include "devo/search_space.hpp"

namespace devo::opt {

enum class Algorithm { de, ga, random_search };

inline std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::de: return "de";
        case Algorithm::ga: return "ga";
        case Algorithm::random_search: return "random";
    }
    return "?";
}

inline Algorithm algorithm_from(const std::string& s) {
    if (s == "de") return Algorithm::de;
    if (s == "ga") return Algorithm::ga;
    if (s == "random" || s == "random_search") return Algorithm::random_search;
    throw ConfigError("unknown algorithm '" + s + "' (expected de, ga, or random)");
}

struct RunParams {
    Algorithm algorithm = Algorithm::de;
    DEConfig de;
    GAConfig ga;
    double duplicate_tolerance = 1e-9;
    unsigned jobs = 1;
};

namespace detail {

inline void record_generation(RunLog& log, const SearchSpace& space, int generation,
                              const std::vector<EvaluatedIndividual>& population,
                              double dup_tol) {
    GenerationRecord rec;
    rec.generation = generation;
    std::vector<Genome> genomes;
    genomes.reserve(population.size());
    double sum = 0.0;
    double best = population.front().fitness.value;
    for (const EvaluatedIndividual& ind : population) {
        genomes.push_back(ind.genome);
        sum += ind.fitness.value;
        if (fitness_better(ind.fitness.value, best)) best = ind.fitness.value;
    }
    rec.avg_fitness = sum / static_cast<double>(population.size());
    rec.best_fitness = best;
    rec.diversity = diversity(space, genomes, dup_tol);
    log.records.push_back(std::move(rec));
}

inline void note_evaluated(RunLog& log, const EvaluatedIndividual& ind) {
    log.history.push_back(ind);
    if (!std::isfinite(ind.fitness.value)) ++log.non_finite_evals;
    if (!log.best || fitness_better(ind.fitness.value, log.best->fitness.value))
        log.best = ind;
}

/// Evaluate the starting population (at most the remaining budget). Returns
/// the evaluated prefix as individuals of generation 0.
inline std::vector<EvaluatedIndividual> evaluate_initial(
    RunLog& log, const std::vector<Genome>& genomes, objectives::Evaluator& evaluator,
    objectives::BudgetLedger& ledger, const RngStream& run_stream, unsigned jobs) {
    const std::size_t k = static_cast<std::size_t>(
        std::min<long long>(static_cast<long long>(genomes.size()),
                            ledger.remaining_design_evals()));
    std::vector<EvaluatedIndividual> population(k);
    const RngStream gen_stream = run_stream.child(stream::kEval).child(0);
    parallel_for(k, jobs, [&](std::size_t i) {
        population[i] = {genomes[i],
                         evaluator.evaluate_mean(genomes[i], gen_stream.child(i), ledger),
                         0};
    });
    for (const EvaluatedIndividual& ind : population) note_evaluated(log, ind);
    return population;
}

inline std::vector<Genome> starting_genomes(const SearchSpace& space, int population_size,
                                            const RngStream& run_stream,
                                            const std::optional<std::vector<Genome>>& initial) {
    if (initial) {
        for (const Genome& g : *initial) {
            space.require_same_dim(g);
            if (!space.contains(g))
                throw OutOfBoundsGenome("starting genome outside the search box");
        }
        return *initial;
    }
    RngStream init = run_stream.child(stream::kInit);
    std::vector<Genome> genomes;
    genomes.reserve(population_size);
    for (int i = 0; i < population_size; ++i) genomes.push_back(sample_uniform(space, init));
    return genomes;
}

inline void run_de(RunLog& log, const RunParams& params, objectives::Evaluator& evaluator,
                   objectives::BudgetLedger& ledger, const RngStream& run_stream,
                   std::vector<EvaluatedIndividual> population) {
    const SearchSpace& space = evaluator.spec().space;
    const DEConfig& cfg = params.de;
    const int P = static_cast<int>(population.size());

    for (int gen = 1;; ++gen) {
        const int k = static_cast<int>(
            std::min<long long>(P, ledger.remaining_design_evals()));
        if (k == 0) break;

        std::vector<Genome> pop_genomes;
        pop_genomes.reserve(P);
        for (const EvaluatedIndividual& ind : population) pop_genomes.push_back(ind.genome);

        RngStream ops = run_stream.child(stream::kOps).child(gen);
        std::vector<Genome> trials(k);
        for (int i = 0; i < k; ++i) {
            const MutationEvent mut =
                de_mutate(space, pop_genomes, i, cfg.scaling_factor, ops);
            trials[i] = de_crossover_binomial(pop_genomes[i], mut.mutant,
                                              cfg.crossover_rate, ops)
                            .trial;
        }

        const RngStream gen_stream = run_stream.child(stream::kEval).child(gen);
        std::vector<objectives::Fitness> fits(k);
        parallel_for(static_cast<std::size_t>(k), params.jobs, [&](std::size_t i) {
            fits[i] = evaluator.evaluate_mean(trials[i], gen_stream.child(i), ledger);
        });

        for (int i = 0; i < k; ++i) {
            EvaluatedIndividual trial{std::move(trials[i]), std::move(fits[i]), gen};
            note_evaluated(log, trial);
            if (de_trial_wins(trial.fitness.value, population[i].fitness.value,
                              cfg.select_on_ties))
                population[i] = std::move(trial);
        }

        record_generation(log, space, gen, population, params.duplicate_tolerance);
        if (k < P) {
            log.partial_final_generation = true;
            break;
        }
    }
    log.final_population = std::move(population);
}

inline void run_ga(RunLog& log, const RunParams& params, objectives::Evaluator& evaluator,
                   objectives::BudgetLedger& ledger, const RngStream& run_stream,
                   std::vector<EvaluatedIndividual> population) {
    const SearchSpace& space = evaluator.spec().space;
    const GAConfig& cfg = params.ga;
    const int P = static_cast<int>(population.size());

    std::vector<double> fitness(P);
    for (int i = 0; i < P; ++i) fitness[i] = population[i].fitness.value;
    int best_index = 0;
    for (int i = 1; i < P; ++i)
        if (fitness_better(fitness[i], fitness[best_index])) best_index = i;

    RngStream ops = run_stream.child(stream::kOps);
    long long steps = 0;
    while (ledger.remaining_design_evals() > 0) {
        const int gen = 1 + static_cast<int>(steps / P);
        const int i1 = ga_tournament(fitness, cfg.tournament_size, TournamentMode::select, ops);
        const int i2 = ga_tournament(fitness, cfg.tournament_size, TournamentMode::select, ops);
        Genome child = ga_uniform_crossover(population[i1].genome, population[i2].genome,
                                            cfg.crossover_probability, ops);
        child = ga_mutate(space, std::move(child), cfg.mutation_rate,
                          cfg.mutation_step_fraction, ops);

        const RngStream eval_stream =
            run_stream.child(stream::kEval).child(gen).child(steps % P);
        objectives::Fitness fit = evaluator.evaluate_mean(child, eval_stream, ledger,
                                                          params.jobs);

        // The current best never enters the replacement tournament, so the
        // incumbent champion survives every step.
        const int victim = ga_tournament(fitness, cfg.tournament_size,
                                         TournamentMode::replace, ops, best_index);
        EvaluatedIndividual born{std::move(child), std::move(fit), gen};
        note_evaluated(log, born);
        fitness[victim] = born.fitness.value;
        population[victim] = std::move(born);
        if (fitness_better(fitness[victim], fitness[best_index])) best_index = victim;

        ++steps;
        if (steps % P == 0)
            record_generation(log, space, gen, population, params.duplicate_tolerance);
    }
    if (steps % P != 0) {
        record_generation(log, space, 1 + static_cast<int>((steps - 1) / P), population,
                          params.duplicate_tolerance);
        log.partial_final_generation = true;
    }
    log.final_population = std::move(population);
}

inline void run_random(RunLog& log, const RunParams& params,
                       objectives::Evaluator& evaluator, objectives::BudgetLedger& ledger,
                       const RngStream& run_stream,
                       std::vector<EvaluatedIndividual> population) {
    const SearchSpace& space = evaluator.spec().space;
    const int P = static_cast<int>(population.size());
    RngStream init = run_stream.child(stream::kInit).child(1);  // fresh draws per batch
    for (int gen = 1;; ++gen) {
        const int k = static_cast<int>(
            std::min<long long>(P, ledger.remaining_design_evals()));
        if (k == 0) break;
        std::vector<Genome> batch;
        batch.reserve(k);
        for (int i = 0; i < k; ++i) batch.push_back(sample_uniform(space, init));
        const RngStream gen_stream = run_stream.child(stream::kEval).child(gen);
        std::vector<objectives::Fitness> fits(k);
        parallel_for(static_cast<std::size_t>(k), params.jobs, [&](std::size_t i) {
            fits[i] = evaluator.evaluate_mean(batch[i], gen_stream.child(i), ledger);
        });
        for (int i = 0; i < k; ++i) {
            EvaluatedIndividual ind{std::move(batch[i]), std::move(fits[i]), gen};
            note_evaluated(log, ind);
            population[i % P] = std::move(ind);
        }
        record_generation(log, space, gen, population, params.duplicate_tolerance);
        if (k < P) {
            log.partial_final_generation = true;
            break;
        }
    }
    log.final_population = std::move(population);
}

}  // namespace detail

/// Drive one full optimization run against the evaluator until the budget is
/// spent. The starting population is sampled from the run stream unless
/// `initial` pins it (the paired-comparison protocol shares one across
/// algorithms). Evaluation of the starting population is charged against the
/// budget like any other.
///
/// An evaluator failure (after its one retry) aborts the run; the log keeps
/// everything completed so far and carries the failure message.
inline RunLog run(const RunParams& params, objectives::Evaluator& evaluator,
                  objectives::BudgetLedger& ledger, const RngStream& run_stream,
                  const std::optional<std::vector<Genome>>& initial = std::nullopt) {
    const SearchSpace& space = evaluator.spec().space;
    int P = 0;
    switch (params.algorithm) {
        case Algorithm::de:
            params.de.validate();
            P = params.de.population_size;
            break;
        case Algorithm::ga:
            params.ga.validate();
            P = params.ga.population_size;
            break;
        case Algorithm::random_search:
            P = params.de.population_size;  // batch size for record grouping
            break;
    }
    if (initial) {
        P = static_cast<int>(initial->size());
        if (params.algorithm == Algorithm::de && P < 4)
            throw PopulationTooSmall("starting population too small for rand/1");
        if (P < 1) throw EmptyPopulation("empty starting population");
        if (params.algorithm == Algorithm::ga && params.ga.tournament_size > P)
            throw PopulationTooSmall("tournament size exceeds the starting population");
    }

    RunLog log;
    log.algorithm = to_string(params.algorithm);
    try {
        const std::vector<Genome> genomes =
            detail::starting_genomes(space, P, run_stream, initial);
        std::vector<EvaluatedIndividual> population = detail::evaluate_initial(
            log, genomes, evaluator, ledger, run_stream, params.jobs);
        if (!population.empty()) {
            detail::record_generation(log, space, 0, population,
                                      params.duplicate_tolerance);
            if (population.size() == genomes.size()) {
                switch (params.algorithm) {
                    case Algorithm::de:
                        detail::run_de(log, params, evaluator, ledger, run_stream,
                                       std::move(population));
                        break;
                    case Algorithm::ga:
                        detail::run_ga(log, params, evaluator, ledger, run_stream,
                                       std::move(population));
                        break;
                    case Algorithm::random_search:
                        detail::run_random(log, params, evaluator, ledger, run_stream,
                                           std::move(population));
                        break;
                }
            } else {
                log.partial_final_generation = true;
                log.final_population = std::move(population);
            }
        }
    } catch (const EvaluatorFailure& e) {
        log.failure = e.what();
    }
    log.ledger = ledger.snapshot();
    return log;
}

}  // namespace devo::opt
