#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "devo/biorobots/params.hpp"
#include "devo/biorobots/simulate.hpp"
#include "devo/errors.hpp"
#include "devo/objectives/benchmarks.hpp"
#include "devo/objectives/external.hpp"
#include "devo/parallel.hpp"
#include "devo/rng.hpp"
#include "devo/search_space.hpp"

namespace devo::objectives {

enum class ObjectiveKind { sphere, rastrigin, biorobots, external };

inline std::string to_string(ObjectiveKind k) {
    switch (k) {
        case ObjectiveKind::sphere: return "sphere";
        case ObjectiveKind::rastrigin: return "rastrigin";
        case ObjectiveKind::biorobots: return "biorobots";
        case ObjectiveKind::external: return "external";
    }
    return "?";
}

inline ObjectiveKind objective_kind_from(const std::string& s) {
    if (s == "sphere") return ObjectiveKind::sphere;
    if (s == "rastrigin") return ObjectiveKind::rastrigin;
    if (s == "biorobots") return ObjectiveKind::biorobots;
    if (s == "external") return ObjectiveKind::external;
    throw ConfigError("unknown objective kind '" + s + "'");
}

struct ObjectiveSpec {
    ObjectiveKind kind = ObjectiveKind::sphere;
    SearchSpace space = benchmark_space(6);
    int replicates = 5;  // simulator runs averaged per design evaluation
    biorobots::SimulationSetup setup = biorobots::SimulationSetup::desk_scale();
    ExternalEvaluatorConfig external;

    void validate() const {
        if (replicates < 1) throw ConfigError("replicates must be at least 1");
        if (kind == ObjectiveKind::external && external.command.empty())
            throw ConfigError("external objective needs a command");
        if (kind == ObjectiveKind::biorobots && space.dim() != 6)
            throw ConfigError("the treatment objective searches a 6-dimensional box");
    }
};

/// Score of one design evaluation: the fitness is the plain mean of the
/// replicate values, accumulated in replicate order.
struct Fitness {
    double value = 0.0;
    std::vector<double> replicate_values;
    std::vector<std::uint64_t> replicate_seeds;
};

/// Point-in-time copy of the ledger, safe to store in logs and reports.
struct LedgerSnapshot {
    std::string unit;  // "design_evals" | "sim_runs"
    long long max = 0;
    long long design_evals_used = 0;
    long long design_evals_max = 0;
    long long sim_runs_used = 0;
};

/// Tracks spent evaluations in both currencies. The configured limit is
/// expressed in one unit; the other is derived through the replicate count.
/// reserve() is atomic under concurrent evaluation, and rollback() returns a
/// reservation whose work failed, so failures never leak budget.
class BudgetLedger {
public:
    enum class Unit { design_evals, sim_runs };

    BudgetLedger(Unit unit, long long max, int replicates_per_eval)
        : unit_(unit), max_(max), replicates_(replicates_per_eval) {
        if (max < 0) throw ConfigError("budget must be non-negative");
        if (replicates_per_eval < 1) throw ConfigError("replicates must be at least 1");
    }

    static Unit unit_from(const std::string& s) {
        if (s == "design" || s == "design_evals") return Unit::design_evals;
        if (s == "sim" || s == "sim_runs") return Unit::sim_runs;
        throw ConfigError("unknown budget unit '" + s + "' (expected design or sim)");
    }

    /// Claim one design evaluation (replicates_per_eval simulator runs).
    /// Throws BudgetExhausted, claiming nothing, if it does not fit.
    void reserve() {
        std::lock_guard<std::mutex> lock(mu_);
        if (remaining_unlocked() < 1)
            throw BudgetExhausted("evaluation budget exhausted (" +
                                  std::to_string(design_used_) + " design evaluations, " +
                                  std::to_string(sim_used_) + " simulator runs spent)");
        design_used_ += 1;
        sim_used_ += replicates_;
    }

    /// Return a reservation whose evaluation failed.
    void rollback() {
        std::lock_guard<std::mutex> lock(mu_);
        design_used_ -= 1;
        sim_used_ -= replicates_;
    }

    /// Whole design evaluations that still fit.
    long long remaining_design_evals() const {
        std::lock_guard<std::mutex> lock(mu_);
        return remaining_unlocked();
    }

    long long design_evals_used() const {
        std::lock_guard<std::mutex> lock(mu_);
        return design_used_;
    }
    long long sim_runs_used() const {
        std::lock_guard<std::mutex> lock(mu_);
        return sim_used_;
    }
    long long design_evals_max() const {
        return unit_ == Unit::design_evals ? max_ : max_ / replicates_;
    }
    int replicates_per_eval() const { return replicates_; }

    LedgerSnapshot snapshot() const {
        std::lock_guard<std::mutex> lock(mu_);
        return {unit_ == Unit::design_evals ? "design_evals" : "sim_runs", max_,
                design_used_, design_evals_max(), sim_used_};
    }

private:
    long long remaining_unlocked() const {
        if (unit_ == Unit::design_evals) return max_ - design_used_;
        return (max_ - sim_used_) / replicates_;
    }

    Unit unit_;
    long long max_;
    int replicates_;
    mutable std::mutex mu_;
    long long design_used_ = 0;
    long long sim_used_ = 0;
};

/// Evaluates genomes against the configured objective. For the external kind
/// it owns the child process; all other kinds are stateless. evaluate_mean
/// with the same stream is bit-identical however many calls run concurrently.
class Evaluator {
public:
    explicit Evaluator(ObjectiveSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

    const ObjectiveSpec& spec() const { return spec_; }

    /// One simulator run / one function probe. Deterministic per (genome,
    /// stream key); the stream is consumed only by stochastic kinds.
    double evaluate_once(const Genome& genome, const RngStream& seed) {
        spec_.space.require_same_dim(genome);
        if (!spec_.space.contains(genome))
            throw OutOfBoundsGenome("genome outside the search box");
        switch (spec_.kind) {
            case ObjectiveKind::sphere: return sphere(genome);
            case ObjectiveKind::rastrigin: return rastrigin(genome);
            case ObjectiveKind::biorobots:
                return biorobots::remaining_cancer(
                    biorobots::DesignParams::from_genome(genome), spec_.setup, seed);
            case ObjectiveKind::external: {
                std::lock_guard<std::mutex> lock(external_mu_);
                if (!external_)
                    external_ = std::make_unique<ExternalEvaluator>(spec_.external);
                return external_->evaluate(genome, seed.key());
            }
        }
        throw ConfigError("unhandled objective kind");
    }

    /// One design evaluation: R replicates with seeds derived child(0..R-1)
    /// from eval_stream, averaged in replicate order. Reserves budget up
    /// front; a replicate failure is retried once on a fresh derived seed,
    /// and a second failure rolls the reservation back and rethrows.
    Fitness evaluate_mean(const Genome& genome, const RngStream& eval_stream,
                          BudgetLedger& ledger, unsigned jobs = 1) {
        const int R = spec_.replicates;
        ledger.reserve();
        Fitness fit;
        fit.replicate_values.assign(R, 0.0);
        fit.replicate_seeds.assign(R, 0);
        try {
            parallel_for(static_cast<std::size_t>(R), effective_jobs(jobs),
                         [&](std::size_t r) {
                             const RngStream rep = eval_stream.child(r);
                             fit.replicate_seeds[r] = rep.key();
                             try {
                                 fit.replicate_values[r] = evaluate_once(genome, rep);
                             } catch (const EvaluatorFailure&) {
                                 const RngStream retry = rep.child(stream::kRetry);
                                 fit.replicate_seeds[r] = retry.key();
                                 fit.replicate_values[r] = evaluate_once(genome, retry);
                             }
                         });
        } catch (...) {
            ledger.rollback();
            throw;
        }
        double sum = 0.0;
        for (double v : fit.replicate_values) sum += v;
        fit.value = sum / R;
        return fit;
    }

private:
    // The external child is a single serialized conversation; fanning its
    // replicates out would interleave request lines.
    unsigned effective_jobs(unsigned jobs) const {
        return spec_.kind == ObjectiveKind::external ? 1 : jobs;
    }

    ObjectiveSpec spec_;
    std::mutex external_mu_;
    std::unique_ptr<ExternalEvaluator> external_;
};

}  // namespace devo::objectives
