#pragma once

#include <string>

#include "devo/errors.hpp"
#include "devo/search_space.hpp"

namespace devo::biorobots {

/// The six tunable controller parameters the optimizer searches over.
/// Field order matches genome order everywhere (CSV columns, config files).
struct DesignParams {
    double attached_migration_bias = 0.5;    // [0,1], cargo-laden directional bias
    double unattached_migration_bias = 0.5;  // [0,1], cargo-seeking directional bias
    double worker_relative_adhesion = 5.0;   // [0,10]
    double worker_relative_repulsion = 5.0;  // [0,10]
    double worker_persistence_time = 5.0;    // min, [0,10]
    double cargo_release_o2_threshold = 10.0;  // mmHg, [0,20]

    /// Canonical design box.
    static SearchSpace space() {
        return SearchSpace({
            {"attached_migration_bias", 0.0, 1.0, ""},
            {"unattached_migration_bias", 0.0, 1.0, ""},
            {"worker_relative_adhesion", 0.0, 10.0, ""},
            {"worker_relative_repulsion", 0.0, 10.0, ""},
            {"worker_persistence_time", 0.0, 10.0, "min"},
            {"cargo_release_o2_threshold", 0.0, 20.0, "mmHg"},
        });
    }

    static DesignParams from_genome(const Genome& g) {
        const SearchSpace box = space();
        box.require_same_dim(g);
        if (!box.contains(g))
            throw OutOfBoundsGenome("design parameters outside the design box");
        DesignParams p;
        p.attached_migration_bias = g[0];
        p.unattached_migration_bias = g[1];
        p.worker_relative_adhesion = g[2];
        p.worker_relative_repulsion = g[3];
        p.worker_persistence_time = g[4];
        p.cargo_release_o2_threshold = g[5];
        return p;
    }

    Genome to_genome() const {
        return {attached_migration_bias,  unattached_migration_bias,
                worker_relative_adhesion, worker_relative_repulsion,
                worker_persistence_time,  cargo_release_o2_threshold};
    }
};

/// Fixed model constants. Rates are per minute, distances in micrometers,
/// oxygen in mmHg.
struct SimConstants {
    double damage_rate = 0.03333;          // drug damage accumulation
    double repair_rate = 0.004167;         // damage repair
    double drug_death_rate = 0.004167;     // death hazard per unit damage
    double elastic_coefficient = 0.05;     // attached cargo spring relaxation
    double cargo_o2_relative_uptake = 0.1;
    double cargo_apoptosis_rate = 4.065e-5;  // doubles as drug clearance rate
    double cargo_relative_adhesion = 0.0;
    double cargo_relative_repulsion = 5.0;
    double max_relative_adhesion_distance = 1.25;  // times summed radii
    double max_elastic_displacement = 50.0;        // um, tether break distance
    double max_attachment_distance = 18.0;         // um
    double min_attachment_distance = 14.0;         // um
    double motility_shutdown_threshold = 0.001;
    double attachment_receptor_threshold = 0.1;
    double worker_migration_speed = 2.0;  // um/min
    double worker_apoptosis_rate = 0.0;
    double worker_o2_relative_uptake = 0.1;
};

/// Experiment timeline and deployment sizes.
struct Schedule {
    double growth_duration = 10080.0;     // min (7 days)
    double treatment_duration = 4320.0;   // min (3 days)
    double dt_mechanics = 0.5;            // min, agent update step
    double dt_diffusion = 0.1;            // min, field update substep
    double initial_tumor_radius = 200.0;  // um
    int worker_count = 50;
    int cargo_count = 50;

    static Schedule full_scale() { return Schedule{}; }

    /// Shortened timeline for desk-scale experiments; pair with
    /// TissueConfig::desk_scale() so growth still fills a comparable tumor.
    /// Coarser steps too: the desk grid (h = 25) keeps the diffusion update
    /// stable at dt = 1/6 (lambda ~ 0.213) and agents move well under a
    /// radius per minute, so nothing outruns the mechanics step.
    static Schedule desk_scale() {
        Schedule s;
        s.growth_duration = 480.0;     // 8 h
        s.treatment_duration = 240.0;  // 4 h
        s.dt_mechanics = 1.0;
        s.dt_diffusion = 1.0 / 6.0;
        return s;
    }
};

/// Tissue, oxygen, and drug model knobs. These define the reduced substrate
/// the agents live in; everything here is visible in config files.
struct TissueConfig {
    double domain_size = 800.0;    // um, square domain edge
    double grid_spacing = 20.0;    // um, field lattice spacing
    double far_field_o2 = 38.0;    // mmHg, boundary ring value
    double hypoxia_threshold = 5.0;  // mmHg, below this cells stop cycling
    double o2_diffusion = 800.0;   // um^2/min
    double cell_o2_uptake = 0.08;  // 1/min, per cancer cell at a node
    double division_rate = 1.0e-4;  // 1/min at full oxygen
    double cell_radius = 7.5;      // um
    double cell_spacing = 15.0;    // um, initial lattice pitch
    double tumor_margin = 100.0;   // um, clearance between disc and boundary
    int crowding_limit = 5;        // max neighbors within crowding_radius
    double crowding_radius = 14.0;  // um
    double repulsion_strength = 10.0;  // um/min at full overlap
    double adhesion_strength = 0.4;    // um/min at contact
    double cell_relative_adhesion = 1.0;
    double cell_relative_repulsion = 1.0;
    double agent_radius = 5.0;     // um, workers and cargo
    double drug_deposit_radius = 50.0;  // um
    double drug_deposit_amount = 1.0;   // peak concentration per release

    static TissueConfig full_scale() { return TissueConfig{}; }

    /// Division rate raised in proportion to the shortened growth window so a
    /// desk run grows a tumor of similar relative size. The coarser lattice
    /// (25 divides the 800 um domain into 32 nodes per side) keeps field
    /// updates cheap enough for optimization studies on one core.
    static TissueConfig desk_scale() {
        TissueConfig t;
        t.division_rate = 2.1e-3;  // 10080/480 times the full-scale rate
        t.grid_spacing = 25.0;
        return t;
    }
};

/// Everything a replicate needs besides the design and the seed.
struct SimulationSetup {
    SimConstants constants;
    Schedule schedule;
    TissueConfig tissue;

    static SimulationSetup desk_scale() {
        return {SimConstants{}, Schedule::desk_scale(), TissueConfig::desk_scale()};
    }
    static SimulationSetup full_scale() {
        return {SimConstants{}, Schedule::full_scale(), TissueConfig::full_scale()};
    }
};

inline SimulationSetup setup_for_preset(const std::string& preset) {
    if (preset == "desk") return SimulationSetup::desk_scale();
    if (preset == "full") return SimulationSetup::full_scale();
    throw ConfigError("unknown preset '" + preset + "' (expected desk or full)");
}

}  // namespace devo::biorobots
