#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "devo/errors.hpp"
#include "devo/opt/runlog.hpp"
#include "devo/search_space.hpp"

namespace devo::harness {

/// Shortest decimal form that parses back to the same bits.
inline std::string format_double(double v) {
    char buf[64];
    const std::to_chars_result r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);  // fixed newlines on every platform
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return out;
}

inline std::string genome_header(const SearchSpace& space) {
    std::string header;
    for (std::size_t d = 0; d < space.dim(); ++d) {
        if (d) header += ',';
        header += csv_field(space.dims()[d].name);
    }
    return header;
}

inline void append_genome(std::string& row, const Genome& g) {
    for (std::size_t d = 0; d < g.size(); ++d) {
        if (d) row += ',';
        row += format_double(g[d]);
    }
}

}  // namespace detail

/// Per-generation population summaries: the data behind convergence curves.
inline void export_convergence(const opt::RunLog& log, const std::filesystem::path& file) {
    std::ofstream out = detail::open_out(file);
    out << "generation,avg_fitness,best_fitness,mean_pairwise_distance,duplicate_count\n";
    for (const opt::GenerationRecord& rec : log.records) {
        out << rec.generation << ',' << format_double(rec.avg_fitness) << ','
            << format_double(rec.best_fitness) << ','
            << format_double(rec.diversity.mean_pairwise_distance) << ','
            << rec.diversity.duplicate_count << '\n';
    }
    if (!out) throw IoError("failed writing '" + file.string() + "'");
}

/// Every tested individual in evaluation order: the data behind scatter
/// plots of the explored design space.
inline void export_history(const opt::RunLog& log, const SearchSpace& space,
                           const std::filesystem::path& file) {
    std::ofstream out = detail::open_out(file);
    out << detail::genome_header(space) << ",fitness,generation\n";
    for (const opt::EvaluatedIndividual& ind : log.history) {
        std::string row;
        detail::append_genome(row, ind.genome);
        out << row << ',' << format_double(ind.fitness.value) << ',' << ind.generation
            << '\n';
    }
    if (!out) throw IoError("failed writing '" + file.string() + "'");
}

inline void export_final_population(const opt::RunLog& log, const SearchSpace& space,
                                    const std::filesystem::path& file) {
    std::ofstream out = detail::open_out(file);
    out << detail::genome_header(space) << ",fitness\n";
    for (const opt::EvaluatedIndividual& ind : log.final_population) {
        std::string row;
        detail::append_genome(row, ind.genome);
        out << row << ',' << format_double(ind.fitness.value) << '\n';
    }
    if (!out) throw IoError("failed writing '" + file.string() + "'");
}

/// Write the three per-run CSV files for one algorithm's log.
inline void export_runlog(const opt::RunLog& log, const SearchSpace& space,
                          const std::filesystem::path& dir, int run_index) {
    const std::string tag = log.algorithm + "_" + std::to_string(run_index);
    export_convergence(log, dir / ("convergence_" + tag + ".csv"));
    export_history(log, space, dir / ("history_" + tag + ".csv"));
    export_final_population(log, space, dir / ("final_population_" + tag + ".csv"));
}

inline nlohmann::ordered_json runlog_summary(const opt::RunLog& log) {
    nlohmann::ordered_json j;
    j["algorithm"] = log.algorithm;
    j["generations"] = log.records.size();
    j["partial_final_generation"] = log.partial_final_generation;
    if (log.best) {
        j["best_fitness"] = log.best->fitness.value;
        j["best_genome"] = log.best->genome;
        j["best_generation"] = log.best->generation;
    } else {
        j["best_fitness"] = nullptr;
        j["best_genome"] = nlohmann::json::array();
        j["best_generation"] = nullptr;
    }
    if (!log.records.empty()) {
        const opt::GenerationRecord& last = log.records.back();
        j["final_diversity"] = {
            {"mean_pairwise_distance", last.diversity.mean_pairwise_distance},
            {"duplicate_count", last.diversity.duplicate_count},
        };
    }
    j["ledger"] = {
        {"unit", log.ledger.unit},
        {"max", log.ledger.max},
        {"design_evals_used", log.ledger.design_evals_used},
        {"design_evals_max", log.ledger.design_evals_max},
        {"sim_runs_used", log.ledger.sim_runs_used},
    };
    j["non_finite_evals"] = log.non_finite_evals;
    j["failure"] = log.failure;
    return j;
}

}  // namespace devo::harness
