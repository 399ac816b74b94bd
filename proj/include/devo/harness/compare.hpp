#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "devo/harness/config.hpp"
#include "devo/harness/export.hpp"
#include "devo/objectives/objective.hpp"
#include "devo/opt/de.hpp"
#include "devo/opt/run.hpp"
#include "devo/rng.hpp"

namespace devo::harness {

/// One comparison run: every enabled algorithm started from the same
/// initial population under its own fresh budget.
struct PairedRun {
    int run_index = 0;
    std::vector<Genome> initial_population;
    std::map<std::string, opt::RunLog> logs;  // keyed by algorithm tag
    /// Algorithm tag with the lowest best-ever fitness, "tie" on an exact
    /// tie, empty when any log in the pair failed.
    std::string winner;
    bool failed = false;
};

struct ComparisonReport {
    std::vector<PairedRun> runs;
    std::map<std::string, int> wins;  // per algorithm tag, plus "tie"
    int failed_runs = 0;
};

namespace detail {

inline void judge(PairedRun& pair) {
    for (const auto& [tag, log] : pair.logs) pair.failed |= !log.failure.empty();
    if (pair.failed) return;
    std::string winner;
    bool tie = false;
    double best = 0.0;
    for (const auto& [tag, log] : pair.logs) {
        if (!log.best) continue;
        const double v = log.best->fitness.value;
        if (winner.empty() || opt::fitness_better(v, best)) {
            winner = tag;
            best = v;
            tie = false;
        } else if (v == best) {
            tie = true;
        }
    }
    pair.winner = tie ? "tie" : winner;
}

}  // namespace detail

/// The paired study: comparison_runs independent repetitions, each sampling
/// one starting population and running every enabled algorithm from it with
/// an identical budget. Deterministic in (config, master_seed) regardless of
/// the jobs setting. A failed run marks only its own pair.
inline ComparisonReport compare(const ExperimentConfig& cfg) {
    cfg.validate();
    ComparisonReport report;
    const RngStream master(cfg.master_seed);
    const int P = cfg.de.population_size;  // equal to ga's when both enabled

    for (int r = 0; r < cfg.comparison_runs; ++r) {
        PairedRun pair;
        pair.run_index = r;
        const RngStream run_stream = master.child(stream::kRun).child(r);

        {
            RngStream init = run_stream.child(stream::kInit);
            for (int i = 0; i < P; ++i)
                pair.initial_population.push_back(
                    sample_uniform(cfg.objective.space, init));
        }

        for (opt::Algorithm alg : cfg.algorithms) {
            objectives::Evaluator evaluator(cfg.objective);
            objectives::BudgetLedger ledger(cfg.budget_unit, cfg.budget_max,
                                            cfg.objective.replicates);
            opt::RunLog log = opt::run(cfg.run_params(alg), evaluator, ledger, run_stream,
                                       pair.initial_population);
            pair.logs.emplace(opt::to_string(alg), std::move(log));
        }

        detail::judge(pair);
        if (pair.failed)
            ++report.failed_runs;
        else
            ++report.wins[pair.winner];
        report.runs.push_back(std::move(pair));
    }
    return report;
}

/// report.json for a comparison study. Every field is recomputable from the
/// CSVs exported alongside it.
inline nlohmann::ordered_json report_json(const ComparisonReport& report,
                                          const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["objective"] = objectives::to_string(cfg.objective.kind);
    j["preset"] = cfg.preset;
    j["master_seed"] = cfg.master_seed;
    j["comparison_runs"] = cfg.comparison_runs;
    j["replicates"] = cfg.objective.replicates;
    j["budget"] = {
        {"unit", cfg.budget_unit == objectives::BudgetLedger::Unit::design_evals
                     ? "design_evals"
                     : "sim_runs"},
        {"max", cfg.budget_max},
    };
    nlohmann::ordered_json algs = nlohmann::ordered_json::array();
    for (opt::Algorithm a : cfg.algorithms) algs.push_back(opt::to_string(a));
    j["algorithms"] = algs;

    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const PairedRun& pair : report.runs) {
        nlohmann::ordered_json jr;
        jr["run"] = pair.run_index;
        jr["winner"] = pair.winner;
        jr["failed"] = pair.failed;
        for (const auto& [tag, log] : pair.logs) jr[tag] = runlog_summary(log);
        runs.push_back(std::move(jr));
    }
    j["runs"] = std::move(runs);

    nlohmann::ordered_json wins = nlohmann::ordered_json::object();
    for (const auto& [tag, n] : report.wins) wins[tag] = n;
    j["summary"] = {
        {"wins", std::move(wins)},
        {"failed_runs", report.failed_runs},
    };
    return j;
}

/// Write all CSVs plus report.json into dir.
inline void export_comparison(const ComparisonReport& report, const ExperimentConfig& cfg,
                              const std::filesystem::path& dir) {
    for (const PairedRun& pair : report.runs)
        for (const auto& [tag, log] : pair.logs)
            export_runlog(log, cfg.objective.space, dir, pair.run_index);
    std::ofstream out = detail::open_out(dir / "report.json");
    out << report_json(report, cfg).dump(2) << '\n';
    if (!out) throw IoError("failed writing report.json");
}

}  // namespace devo::harness
