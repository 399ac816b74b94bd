#include <catch2/catch_amalgamated.hpp>

#include "devo/harness/export.hpp"
#include "devo/opt/run.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

using namespace devo;
using namespace devo::harness;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::path("/tmp") / ("devo_export_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("doubles round-trip through their formatted form", "[export]") {
    for (double v : {0.0, 1.0, -1.0, 0.1, 1.0 / 3.0, 5.12, 1e-300, 1e300,
                     3.141592653589793, 38.0, 2.0999999999999996}) {
        const std::string s = format_double(v);
        REQUIRE(std::strtod(s.c_str(), nullptr) == v);
    }
    REQUIRE(format_double(0.5) == "0.5");
    REQUIRE(format_double(20.0) == "20");
    REQUIRE(format_double(-3.0) == "-3");
}

TEST_CASE("csv fields with separators are quoted", "[export]") {
    REQUIRE(harness::detail::csv_field("plain") == "plain");
    REQUIRE(harness::detail::csv_field("with,comma") == "\"with,comma\"");
    REQUIRE(harness::detail::csv_field("with\"quote") == "\"with\"\"quote\"");
}

TEST_CASE("a finished run exports three consistent files", "[export]") {
    objectives::ObjectiveSpec spec;
    spec.kind = objectives::ObjectiveKind::rastrigin;
    spec.space = objectives::benchmark_space(6);
    spec.replicates = 1;
    objectives::Evaluator evaluator(spec);
    objectives::BudgetLedger ledger(objectives::BudgetLedger::Unit::design_evals, 60, 1);
    opt::RunParams params;
    params.algorithm = opt::Algorithm::de;
    opt::RunLog log = opt::run(params, evaluator, ledger, RngStream(2718));

    TempDir tmp;
    export_runlog(log, spec.space, tmp.path, 4);

    auto conv = read_lines(tmp.path / "convergence_de_4.csv");
    REQUIRE(conv.size() == 1 + log.records.size());
    REQUIRE(conv[0] ==
            "generation,avg_fitness,best_fitness,mean_pairwise_distance,duplicate_count");
    for (std::size_t i = 0; i < log.records.size(); ++i) {
        auto f = split_csv(conv[1 + i]);
        REQUIRE(f.size() == 5);
        REQUIRE(std::stoi(f[0]) == log.records[i].generation);
        REQUIRE(std::strtod(f[1].c_str(), nullptr) == log.records[i].avg_fitness);
        REQUIRE(std::strtod(f[2].c_str(), nullptr) == log.records[i].best_fitness);
        REQUIRE(std::strtod(f[3].c_str(), nullptr) ==
                log.records[i].diversity.mean_pairwise_distance);
        REQUIRE(std::stoi(f[4]) == log.records[i].diversity.duplicate_count);
    }

    auto hist = read_lines(tmp.path / "history_de_4.csv");
    REQUIRE(hist.size() == 1 + log.history.size());
    REQUIRE(hist[0] == "x0,x1,x2,x3,x4,x5,fitness,generation");
    for (std::size_t i = 0; i < log.history.size(); ++i) {
        auto f = split_csv(hist[1 + i]);
        REQUIRE(f.size() == 8);
        for (int d = 0; d < 6; ++d)
            REQUIRE(std::strtod(f[d].c_str(), nullptr) == log.history[i].genome[d]);
        REQUIRE(std::strtod(f[6].c_str(), nullptr) == log.history[i].fitness.value);
        REQUIRE(std::stoi(f[7]) == log.history[i].generation);
    }

    auto fin = read_lines(tmp.path / "final_population_de_4.csv");
    REQUIRE(fin.size() == 1 + log.final_population.size());
    REQUIRE(fin[0] == "x0,x1,x2,x3,x4,x5,fitness");
    for (std::size_t i = 0; i < log.final_population.size(); ++i) {
        auto f = split_csv(fin[1 + i]);
        for (int d = 0; d < 6; ++d)
            REQUIRE(std::strtod(f[d].c_str(), nullptr) ==
                    log.final_population[i].genome[d]);
    }
}

TEST_CASE("an empty log exports headers only", "[export]") {
    opt::RunLog log;
    log.algorithm = "de";
    TempDir tmp;
    export_runlog(log, objectives::benchmark_space(3), tmp.path, 0);

    REQUIRE(read_lines(tmp.path / "convergence_de_0.csv") ==
            std::vector<std::string>{
                "generation,avg_fitness,best_fitness,mean_pairwise_distance,duplicate_count"});
    REQUIRE(read_lines(tmp.path / "history_de_0.csv") ==
            std::vector<std::string>{"x0,x1,x2,fitness,generation"});
    REQUIRE(read_lines(tmp.path / "final_population_de_0.csv") ==
            std::vector<std::string>{"x0,x1,x2,fitness"});
}

TEST_CASE("design-space column names flow into the headers", "[export]") {
    opt::RunLog log;
    log.algorithm = "ga";
    TempDir tmp;
    export_history(log, biorobots::DesignParams::space(), tmp.path / "h.csv");
    auto lines = read_lines(tmp.path / "h.csv");
    REQUIRE(lines[0] ==
            "attached_migration_bias,unattached_migration_bias,worker_relative_adhesion,"
            "worker_relative_repulsion,worker_persistence_time,cargo_release_o2_threshold,"
            "fitness,generation");
}

TEST_CASE("the run summary carries ledger and best verbatim", "[export]") {
    objectives::ObjectiveSpec spec;
    spec.kind = objectives::ObjectiveKind::sphere;
    spec.replicates = 1;
    objectives::Evaluator evaluator(spec);
    objectives::BudgetLedger ledger(objectives::BudgetLedger::Unit::sim_runs, 40, 1);
    opt::RunParams params;
    params.algorithm = opt::Algorithm::ga;
    opt::RunLog log = opt::run(params, evaluator, ledger, RngStream(31415));

    nlohmann::ordered_json j = runlog_summary(log);
    REQUIRE(j["algorithm"] == "ga");
    REQUIRE(j["generations"] == log.records.size());
    REQUIRE(j["best_fitness"] == log.best->fitness.value);
    REQUIRE(j["best_genome"].size() == 6);
    REQUIRE(j["ledger"]["unit"] == "sim_runs");
    REQUIRE(j["ledger"]["sim_runs_used"] == 40);
    REQUIRE(j["ledger"]["design_evals_used"] == 40);
    REQUIRE(j["failure"] == "");

    opt::RunLog empty;
    empty.algorithm = "de";
    nlohmann::ordered_json je = runlog_summary(empty);
    REQUIRE(je["best_fitness"].is_null());
    REQUIRE(je["best_genome"].empty());
    REQUIRE_FALSE(je.contains("final_diversity"));
}

TEST_CASE("export creates missing directories and reports unwritable ones", "[export]") {
    opt::RunLog log;
    log.algorithm = "de";
    TempDir tmp;
    const fs::path nested = tmp.path / "a" / "b" / "c.csv";
    export_convergence(log, nested);
    REQUIRE(fs::exists(nested));

    REQUIRE_THROWS_AS(export_convergence(log, "/proc/version/impossible/x.csv"), IoError);
}
