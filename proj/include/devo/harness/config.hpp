#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "devo/biorobots/params.hpp"
#include "devo/errors.hpp"
#include "devo/objectives/objective.hpp"
#include "devo/opt/config.hpp"
#include "devo/opt/run.hpp"
#include "devo/search_space.hpp"

namespace devo::harness {

struct ExperimentConfig {
    std::uint64_t master_seed = 42;
    int comparison_runs = 3;
    std::string output_dir = "results";
    unsigned jobs = 0;  // 0 = one per hardware thread
    std::vector<opt::Algorithm> algorithms = {opt::Algorithm::de, opt::Algorithm::ga};
    opt::DEConfig de;
    opt::GAConfig ga;
    objectives::ObjectiveSpec objective;
    objectives::BudgetLedger::Unit budget_unit = objectives::BudgetLedger::Unit::sim_runs;
    long long budget_max = 1000;
    double duplicate_tolerance = 1e-9;
    std::string preset = "desk";

    bool has_algorithm(opt::Algorithm a) const {
        for (opt::Algorithm x : algorithms)
            if (x == a) return true;
        return false;
    }

    void validate() const {
        if (comparison_runs < 1) throw ConfigError("comparison_runs must be at least 1");
        if (algorithms.empty()) throw ConfigError("at least one algorithm must be enabled");
        if (budget_max < 0) throw ConfigError("budget.max must be non-negative");
        de.validate();
        ga.validate();
        objective.validate();
        if (has_algorithm(opt::Algorithm::de) && has_algorithm(opt::Algorithm::ga) &&
            de.population_size != ga.population_size)
            throw ConfigError(
                "paired comparisons share one initial population, so de.population_size "
                "and ga.population_size must be equal");
    }

    opt::RunParams run_params(opt::Algorithm a) const {
        opt::RunParams p;
        p.algorithm = a;
        p.de = de;
        p.ga = ga;
        p.duplicate_tolerance = duplicate_tolerance;
        p.jobs = resolve_jobs(jobs);
        return p;
    }
};

/// Flag values that take precedence over the config file.
struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<long long> budget;
    std::optional<std::string> budget_unit;
    std::optional<std::string> out;
    std::optional<std::string> preset;
    std::optional<unsigned> jobs;
};

namespace detail {

using nlohmann::json;

inline void check_keys(const json& obj, const std::string& where,
                       std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) known |= (it.key() == k);
        if (!known)
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("bad value for '") + key + "'");
    }
}

inline SearchSpace parse_space(const json& j) {
    check_keys(j, "space", {"dimensions"});
    if (!j.contains("dimensions") || !j.at("dimensions").is_array() ||
        j.at("dimensions").empty())
        throw ConfigError("space.dimensions must be a non-empty array");
    std::vector<Dimension> dims;
    for (const json& d : j.at("dimensions")) {
        check_keys(d, "space.dimensions[]", {"name", "lo", "hi", "unit"});
        Dimension dim;
        dim.name = get_or<std::string>(d, "name", "x" + std::to_string(dims.size()));
        if (!d.contains("lo") || !d.contains("hi"))
            throw ConfigError("each dimension needs lo and hi");
        dim.lo = d.at("lo").get<double>();
        dim.hi = d.at("hi").get<double>();
        dim.unit = get_or<std::string>(d, "unit", "");
        dims.push_back(std::move(dim));
    }
    return SearchSpace(std::move(dims));
}

inline void parse_de(const json& j, opt::DEConfig& de) {
    check_keys(j, "de", {"population_size", "scaling_factor", "crossover_rate",
                         "select_on_ties"});
    de.population_size = get_or(j, "population_size", de.population_size);
    de.scaling_factor = get_or(j, "scaling_factor", de.scaling_factor);
    de.crossover_rate = get_or(j, "crossover_rate", de.crossover_rate);
    de.select_on_ties = get_or(j, "select_on_ties", de.select_on_ties);
}

inline void parse_ga(const json& j, opt::GAConfig& ga) {
    check_keys(j, "ga", {"population_size", "tournament_size", "crossover_probability",
                         "mutation_rate", "mutation_step_fraction"});
    ga.population_size = get_or(j, "population_size", ga.population_size);
    ga.tournament_size = get_or(j, "tournament_size", ga.tournament_size);
    ga.crossover_probability = get_or(j, "crossover_probability", ga.crossover_probability);
    ga.mutation_rate = get_or(j, "mutation_rate", ga.mutation_rate);
    ga.mutation_step_fraction =
        get_or(j, "mutation_step_fraction", ga.mutation_step_fraction);
}

inline void parse_schedule(const json& j, biorobots::Schedule& s) {
    check_keys(j, "schedule",
               {"growth_duration", "treatment_duration", "dt_mechanics", "dt_diffusion",
                "initial_tumor_radius", "worker_count", "cargo_count"});
    s.growth_duration = get_or(j, "growth_duration", s.growth_duration);
    s.treatment_duration = get_or(j, "treatment_duration", s.treatment_duration);
    s.dt_mechanics = get_or(j, "dt_mechanics", s.dt_mechanics);
    s.dt_diffusion = get_or(j, "dt_diffusion", s.dt_diffusion);
    s.initial_tumor_radius = get_or(j, "initial_tumor_radius", s.initial_tumor_radius);
    s.worker_count = get_or(j, "worker_count", s.worker_count);
    s.cargo_count = get_or(j, "cargo_count", s.cargo_count);
}

inline void parse_tissue(const json& j, biorobots::TissueConfig& t) {
    check_keys(j, "tissue",
               {"domain_size", "grid_spacing", "far_field_o2", "hypoxia_threshold",
                "o2_diffusion", "cell_o2_uptake", "division_rate", "cell_radius",
                "cell_spacing", "tumor_margin", "crowding_limit", "crowding_radius",
                "repulsion_strength", "adhesion_strength", "cell_relative_adhesion",
                "cell_relative_repulsion", "agent_radius", "drug_deposit_radius",
                "drug_deposit_amount"});
    t.domain_size = get_or(j, "domain_size", t.domain_size);
    t.grid_spacing = get_or(j, "grid_spacing", t.grid_spacing);
    t.far_field_o2 = get_or(j, "far_field_o2", t.far_field_o2);
    t.hypoxia_threshold = get_or(j, "hypoxia_threshold", t.hypoxia_threshold);
    t.o2_diffusion = get_or(j, "o2_diffusion", t.o2_diffusion);
    t.cell_o2_uptake = get_or(j, "cell_o2_uptake", t.cell_o2_uptake);
    t.division_rate = get_or(j, "division_rate", t.division_rate);
    t.cell_radius = get_or(j, "cell_radius", t.cell_radius);
    t.cell_spacing = get_or(j, "cell_spacing", t.cell_spacing);
    t.tumor_margin = get_or(j, "tumor_margin", t.tumor_margin);
    t.crowding_limit = get_or(j, "crowding_limit", t.crowding_limit);
    t.crowding_radius = get_or(j, "crowding_radius", t.crowding_radius);
    t.repulsion_strength = get_or(j, "repulsion_strength", t.repulsion_strength);
    t.adhesion_strength = get_or(j, "adhesion_strength", t.adhesion_strength);
    t.cell_relative_adhesion = get_or(j, "cell_relative_adhesion", t.cell_relative_adhesion);
    t.cell_relative_repulsion =
        get_or(j, "cell_relative_repulsion", t.cell_relative_repulsion);
    t.agent_radius = get_or(j, "agent_radius", t.agent_radius);
    t.drug_deposit_radius = get_or(j, "drug_deposit_radius", t.drug_deposit_radius);
    t.drug_deposit_amount = get_or(j, "drug_deposit_amount", t.drug_deposit_amount);
}

inline void parse_constants(const json& j, biorobots::SimConstants& c) {
    check_keys(j, "constants",
               {"damage_rate", "repair_rate", "drug_death_rate", "elastic_coefficient",
                "cargo_o2_relative_uptake", "cargo_apoptosis_rate", "cargo_relative_adhesion",
                "cargo_relative_repulsion", "max_relative_adhesion_distance",
                "max_elastic_displacement", "max_attachment_distance",
                "min_attachment_distance", "motility_shutdown_threshold",
                "attachment_receptor_threshold", "worker_migration_speed",
                "worker_apoptosis_rate", "worker_o2_relative_uptake"});
    c.damage_rate = get_or(j, "damage_rate", c.damage_rate);
    c.repair_rate = get_or(j, "repair_rate", c.repair_rate);
    c.drug_death_rate = get_or(j, "drug_death_rate", c.drug_death_rate);
    c.elastic_coefficient = get_or(j, "elastic_coefficient", c.elastic_coefficient);
    c.cargo_o2_relative_uptake =
        get_or(j, "cargo_o2_relative_uptake", c.cargo_o2_relative_uptake);
    c.cargo_apoptosis_rate = get_or(j, "cargo_apoptosis_rate", c.cargo_apoptosis_rate);
    c.cargo_relative_adhesion =
        get_or(j, "cargo_relative_adhesion", c.cargo_relative_adhesion);
    c.cargo_relative_repulsion =
        get_or(j, "cargo_relative_repulsion", c.cargo_relative_repulsion);
    c.max_relative_adhesion_distance =
        get_or(j, "max_relative_adhesion_distance", c.max_relative_adhesion_distance);
    c.max_elastic_displacement =
        get_or(j, "max_elastic_displacement", c.max_elastic_displacement);
    c.max_attachment_distance =
        get_or(j, "max_attachment_distance", c.max_attachment_distance);
    c.min_attachment_distance =
        get_or(j, "min_attachment_distance", c.min_attachment_distance);
    c.motility_shutdown_threshold =
        get_or(j, "motility_shutdown_threshold", c.motility_shutdown_threshold);
    c.attachment_receptor_threshold =
        get_or(j, "attachment_receptor_threshold", c.attachment_receptor_threshold);
    c.worker_migration_speed = get_or(j, "worker_migration_speed", c.worker_migration_speed);
    c.worker_apoptosis_rate = get_or(j, "worker_apoptosis_rate", c.worker_apoptosis_rate);
    c.worker_o2_relative_uptake =
        get_or(j, "worker_o2_relative_uptake", c.worker_o2_relative_uptake);
}

}  // namespace detail

/// Build a config from a parsed JSON document plus command-line overrides.
/// Unknown keys and out-of-range values raise ConfigError.
inline ExperimentConfig config_from_json(const nlohmann::json& j,
                                         const CliOverrides& cli = {}) {
    using detail::check_keys;
    using detail::get_or;

    check_keys(j, "config",
               {"master_seed", "comparison_runs", "output_dir", "jobs", "algorithms",
                "duplicate_tolerance", "preset", "space", "objective", "de", "ga",
                "budget", "schedule", "tissue", "constants"});

    ExperimentConfig cfg;
    cfg.master_seed = get_or<std::uint64_t>(j, "master_seed", cfg.master_seed);
    cfg.comparison_runs = get_or(j, "comparison_runs", cfg.comparison_runs);
    cfg.output_dir = get_or<std::string>(j, "output_dir", cfg.output_dir);
    cfg.jobs = get_or(j, "jobs", cfg.jobs);
    cfg.duplicate_tolerance = get_or(j, "duplicate_tolerance", cfg.duplicate_tolerance);

    if (j.contains("algorithms")) {
        if (!j.at("algorithms").is_array())
            throw ConfigError("algorithms must be an array of names");
        cfg.algorithms.clear();
        for (const auto& a : j.at("algorithms"))
            cfg.algorithms.push_back(opt::algorithm_from(a.get<std::string>()));
    }

    cfg.preset = cli.preset.value_or(get_or<std::string>(j, "preset", cfg.preset));
    cfg.objective.setup = biorobots::setup_for_preset(cfg.preset);

    if (j.contains("objective")) {
        const nlohmann::json& o = j.at("objective");
        check_keys(o, "objective", {"kind", "replicates", "dim", "command", "timeout_s"});
        cfg.objective.kind =
            objectives::objective_kind_from(get_or<std::string>(o, "kind", "biorobots"));
        cfg.objective.replicates = get_or(o, "replicates", cfg.objective.replicates);
        if (o.contains("command")) {
            cfg.objective.external.command.clear();
            for (const auto& c : o.at("command"))
                cfg.objective.external.command.push_back(c.get<std::string>());
        }
        cfg.objective.external.timeout_s =
            get_or(o, "timeout_s", cfg.objective.external.timeout_s);
        const int dim = get_or(o, "dim", 6);
        if (dim < 1) throw ConfigError("objective.dim must be positive");
        switch (cfg.objective.kind) {
            case objectives::ObjectiveKind::sphere:
            case objectives::ObjectiveKind::rastrigin:
                cfg.objective.space = objectives::benchmark_space(dim);
                break;
            case objectives::ObjectiveKind::biorobots:
                cfg.objective.space = biorobots::DesignParams::space();
                break;
            case objectives::ObjectiveKind::external:
                break;  // an explicit space section is required below
        }
    } else {
        cfg.objective.kind = objectives::ObjectiveKind::biorobots;
        cfg.objective.space = biorobots::DesignParams::space();
    }

    if (j.contains("space")) {
        if (cfg.objective.kind == objectives::ObjectiveKind::biorobots)
            throw ConfigError(
                "the treatment objective fixes its own 6-dimensional box; drop the space "
                "section");
        cfg.objective.space = detail::parse_space(j.at("space"));
    } else if (cfg.objective.kind == objectives::ObjectiveKind::external) {
        throw ConfigError("an external objective needs an explicit space section");
    }

    if (j.contains("de")) detail::parse_de(j.at("de"), cfg.de);
    if (j.contains("ga")) detail::parse_ga(j.at("ga"), cfg.ga);

    if (j.contains("budget")) {
        const nlohmann::json& b = j.at("budget");
        check_keys(b, "budget", {"unit", "max"});
        cfg.budget_unit = objectives::BudgetLedger::unit_from(
            get_or<std::string>(b, "unit", "sim"));
        cfg.budget_max = get_or<long long>(b, "max", cfg.budget_max);
    }

    if (j.contains("schedule")) detail::parse_schedule(j.at("schedule"), cfg.objective.setup.schedule);
    if (j.contains("tissue")) detail::parse_tissue(j.at("tissue"), cfg.objective.setup.tissue);
    if (j.contains("constants"))
        detail::parse_constants(j.at("constants"), cfg.objective.setup.constants);

    if (cli.seed) cfg.master_seed = *cli.seed;
    if (cli.budget) cfg.budget_max = *cli.budget;
    if (cli.budget_unit)
        cfg.budget_unit = objectives::BudgetLedger::unit_from(*cli.budget_unit);
    if (cli.out) cfg.output_dir = *cli.out;
    if (cli.jobs) cfg.jobs = *cli.jobs;

    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path, const CliOverrides& cli = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid JSON in '" + path + "': " + e.what());
    }
    return config_from_json(j, cli);
}

/// The study this project ships: treatment design on the reduced tissue
/// model, both algorithms, paper hyperparameters and budget.
inline ExperimentConfig default_config(const CliOverrides& cli = {}) {
    return config_from_json(nlohmann::json::object(), cli);
}

}  // namespace devo::harness
