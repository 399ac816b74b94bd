#pragma once

#include <optional>
#include <string>
#include <vector>

#include "devo/diversity.hpp"
#include "devo/objectives/objective.hpp"
#include "devo/search_space.hpp"

namespace devo::opt {

struct EvaluatedIndividual {
    Genome genome;
    objectives::Fitness fitness;
    int generation = 0;  // generation in which the evaluation happened
};

/// Population summary taken after a generation completed (for the steady
/// state algorithm, after each population-size block of births).
struct GenerationRecord {
    int generation = 0;
    double avg_fitness = 0.0;
    double best_fitness = 0.0;
    DiversityStats diversity;
};

/// Complete account of one optimization run.
struct RunLog {
    std::string algorithm;  // "de", "ga", or "random"
    std::vector<GenerationRecord> records;
    /// Every evaluated candidate, in evaluation order: the initial population
    /// first, then each generation's offspring whether or not they survived.
    std::vector<EvaluatedIndividual> history;
    std::vector<EvaluatedIndividual> final_population;
    std::optional<EvaluatedIndividual> best;  // best candidate ever evaluated
    objectives::LedgerSnapshot ledger;
    long long non_finite_evals = 0;
    /// Set when the budget ran out partway through a generation; the last
    /// record then covers fewer offspring than a full block.
    bool partial_final_generation = false;
    /// Non-empty when the run aborted on an evaluator failure; everything
    /// logged up to that point is preserved.
    std::string failure;
};

}  // namespace devo::opt
