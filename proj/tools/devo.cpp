// Command-line front end: optimize, compare, sim, bench.
// Exit codes: 0 success, 1 configuration/usage error, 2 evaluator failure.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "devo/devo.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitEvaluator = 2;

struct CommonFlags {
    std::string config_path;
    devo::harness::CliOverrides cli;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        add_optional(cmd, "--seed", cli.seed, "Master seed");
        add_optional(cmd, "--budget", cli.budget, "Evaluation budget");
        add_optional(cmd, "--budget-unit", cli.budget_unit,
                     "Budget unit: design|sim")
            ->check(CLI::IsMember({"design", "sim"}));
        add_optional(cmd, "--out", cli.out, "Output directory");
        add_optional(cmd, "--preset", cli.preset, "Scale preset: desk|full")
            ->check(CLI::IsMember({"desk", "full"}));
        add_optional(cmd, "--jobs", cli.jobs, "Worker threads (0 = all cores)");
    }

    devo::harness::ExperimentConfig load() const {
        if (config_path.empty()) return devo::harness::default_config(cli);
        return devo::harness::load_config(config_path, cli);
    }

private:
    template <typename T>
    static CLI::Option* add_optional(CLI::App* cmd, const std::string& name,
                                     std::optional<T>& slot, const std::string& help) {
        return cmd->add_option_function<T>(
            name, [&slot](const T& v) { slot = v; }, help);
    }
};

void print_log_line(const devo::opt::RunLog& log, int run_index) {
    std::cout << "  run " << run_index << " " << log.algorithm << ": ";
    if (log.best)
        std::cout << "best " << devo::harness::format_double(log.best->fitness.value)
                  << " after " << log.ledger.design_evals_used << " design evals ("
                  << log.ledger.sim_runs_used << " simulator runs)";
    else
        std::cout << "no evaluations";
    if (!log.failure.empty()) std::cout << " [FAILED: " << log.failure << "]";
    std::cout << "\n";
}

int cmd_optimize(const CommonFlags& common, const std::string& algorithm) {
    devo::harness::ExperimentConfig cfg = common.load();
    const devo::opt::Algorithm alg = devo::opt::algorithm_from(algorithm);

    devo::objectives::Evaluator evaluator(cfg.objective);
    devo::objectives::BudgetLedger ledger(cfg.budget_unit, cfg.budget_max,
                                          cfg.objective.replicates);
    // Same stream family as run 0 of a comparison, so a solo run of either
    // algorithm reproduces its half of that pair.
    const devo::RngStream run_stream =
        devo::RngStream(cfg.master_seed).child(devo::stream::kRun).child(0);
    devo::opt::RunLog log =
        devo::opt::run(cfg.run_params(alg), evaluator, ledger, run_stream);

    devo::harness::export_runlog(log, cfg.objective.space, cfg.output_dir, 0);
    nlohmann::ordered_json j;
    j["objective"] = devo::objectives::to_string(cfg.objective.kind);
    j["master_seed"] = cfg.master_seed;
    j["run"] = devo::harness::runlog_summary(log);
    std::ofstream out =
        devo::harness::detail::open_out(std::filesystem::path(cfg.output_dir) / "report.json");
    out << j.dump(2) << '\n';

    print_log_line(log, 0);
    std::cout << "wrote " << cfg.output_dir << "\n";
    return log.failure.empty() ? kExitOk : kExitEvaluator;
}

int cmd_compare(const CommonFlags& common) {
    devo::harness::ExperimentConfig cfg = common.load();
    const devo::harness::ComparisonReport report = devo::harness::compare(cfg);
    devo::harness::export_comparison(report, cfg, cfg.output_dir);

    for (const devo::harness::PairedRun& pair : report.runs) {
        for (const auto& [tag, log] : pair.logs) print_log_line(log, pair.run_index);
        std::cout << "  run " << pair.run_index << " winner: "
                  << (pair.failed ? "invalid (failure)" : pair.winner) << "\n";
    }
    std::cout << "wrote " << cfg.output_dir << "\n";
    return report.failed_runs == 0 ? kExitOk : kExitEvaluator;
}

int cmd_sim(const CommonFlags& common, const std::string& design_csv) {
    devo::harness::ExperimentConfig cfg = common.load();
    if (cfg.objective.kind != devo::objectives::ObjectiveKind::biorobots)
        throw devo::ConfigError("sim needs the treatment objective");

    devo::Genome genome;
    if (!design_csv.empty()) {
        std::stringstream ss(design_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) genome.push_back(std::stod(tok));
    } else {
        genome = devo::biorobots::DesignParams{}.to_genome();
    }
    const devo::biorobots::DesignParams design =
        devo::biorobots::DesignParams::from_genome(genome);

    const devo::RngStream seed(cfg.master_seed);
    std::vector<devo::biorobots::TraceRow> trace;
    const devo::biorobots::SimulationResult result =
        devo::biorobots::simulate(design, cfg.objective.setup, seed, &trace);

    const std::filesystem::path dir(cfg.output_dir);
    {
        std::ofstream out = devo::harness::detail::open_out(dir / "sim_trace.csv");
        out << "t,live_cells,released_cargo\n";
        for (const devo::biorobots::TraceRow& row : trace)
            out << devo::harness::format_double(row.t) << ',' << row.live_cells << ','
                << row.released_cargo << '\n';
    }
    {
        nlohmann::ordered_json j;
        j["design"] = genome;
        j["master_seed"] = cfg.master_seed;
        j["preset"] = cfg.preset;
        j["live_cancer_cells"] = result.live_cancer_cells;
        j["released_cargo"] = result.released_cargo;
        j["cells_created"] = result.cells_created;
        j["cells_killed_by_drug"] = result.cells_killed_by_drug;
        j["duration_min"] = result.duration;
        std::ofstream out = devo::harness::detail::open_out(dir / "sim_summary.json");
        out << j.dump(2) << '\n';
    }
    std::cout << "live cancer cells: " << result.live_cancer_cells << " (of "
              << result.cells_created << " created), released cargo: "
              << result.released_cargo << "\n";
    std::cout << "wrote " << cfg.output_dir << "\n";
    return kExitOk;
}

int cmd_bench(const CommonFlags& common, int dim) {
    devo::harness::CliOverrides cli = common.cli;
    if (!cli.budget) cli.budget = 200;
    if (!cli.budget_unit) cli.budget_unit = "design";

    bool wrote = false;
    for (const char* kind : {"sphere", "rastrigin"}) {
        nlohmann::json doc;
        doc["objective"] = {{"kind", kind}, {"replicates", 1}, {"dim", dim}};
        doc["algorithms"] = {"de", "ga", "random"};
        devo::harness::ExperimentConfig cfg = devo::harness::config_from_json(doc, cli);
        cfg.comparison_runs = 1;

        const devo::harness::ComparisonReport report = devo::harness::compare(cfg);
        for (const auto& [tag, log] : report.runs.front().logs) {
            std::cout << "  " << kind << " " << tag << ": best "
                      << devo::harness::format_double(
                             log.best ? log.best->fitness.value : 0.0)
                      << "\n";
        }
        if (cli.out) {
            devo::harness::export_comparison(
                report, cfg, std::filesystem::path(*cli.out) / kind);
            wrote = true;
        }
    }
    if (wrote) std::cout << "wrote " << *cli.out << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolutionary design of a cargo-ferrying microrobot swarm: "
                 "optimizers, tissue model, and experiment harness"};
    app.require_subcommand(1);

    CommonFlags opt_flags, cmp_flags, sim_flags, bench_flags;
    std::string algorithm = "de";
    std::string design_csv;
    int bench_dim = 6;

    CLI::App* c_opt = app.add_subcommand("optimize", "Run one algorithm on one objective");
    opt_flags.attach(c_opt);
    c_opt->add_option("--algorithm", algorithm, "de|ga|random")
        ->check(CLI::IsMember({"de", "ga", "random"}));

    CLI::App* c_cmp =
        app.add_subcommand("compare", "Paired runs of every enabled algorithm");
    cmp_flags.attach(c_cmp);

    CLI::App* c_sim = app.add_subcommand("sim", "One treatment replicate with a step trace");
    sim_flags.attach(c_sim);
    c_sim->add_option("--design", design_csv,
                      "Six comma-separated design values (default: box midpoint)");

    CLI::App* c_bench = app.add_subcommand("bench", "Quick analytic-function check");
    bench_flags.attach(c_bench);
    c_bench->add_option("--dim", bench_dim, "Benchmark dimensionality");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);  // prints help or the usage error
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (c_opt->parsed()) return cmd_optimize(opt_flags, algorithm);
        if (c_cmp->parsed()) return cmd_compare(cmp_flags);
        if (c_sim->parsed()) return cmd_sim(sim_flags, design_csv);
        if (c_bench->parsed()) return cmd_bench(bench_flags, bench_dim);
    } catch (const devo::EvaluatorFailure& e) {
        std::cerr << "evaluator failure: " << e.what() << "\n";
        return kExitEvaluator;
    } catch (const devo::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
