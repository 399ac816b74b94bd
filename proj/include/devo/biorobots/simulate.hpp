#pragma once

#include <cmath>
#include <vector>

#include "devo/biorobots/world.hpp"

namespace devo::biorobots {

struct TraceRow {
    double t = 0.0;
    int live_cells = 0;
    int released_cargo = 0;
};

struct SimulationResult {
    int live_cancer_cells = 0;
    int released_cargo = 0;
    long long cells_created = 0;
    long long cells_killed_by_drug = 0;
    double duration = 0.0;
};

/// One replicate: grow the tumor, inject the swarm, treat, count survivors.
/// Pure in (design, setup, seed): two calls with equal arguments give equal
/// results regardless of process, thread, or call order.
inline SimulationResult simulate(const DesignParams& design, const SimulationSetup& setup,
                                 RngStream seed, std::vector<TraceRow>* trace = nullptr) {
    BiorobotWorld world(setup.schedule, setup.tissue, seed);
    const double dt = setup.schedule.dt_mechanics;
    const auto record = [&] {
        if (trace)
            trace->push_back(
                {world.clock(), world.live_cancer_count(), world.released_cargo_count()});
    };
    record();

    const long growth_steps = std::lround(setup.schedule.growth_duration / dt);
    for (long s = 0; s < growth_steps; ++s) {
        world.step(design, setup.constants, dt);
        record();
    }

    world.inject_treatment(setup.schedule.worker_count, setup.schedule.cargo_count);

    const long treatment_steps = std::lround(setup.schedule.treatment_duration / dt);
    for (long s = 0; s < treatment_steps; ++s) {
        world.step(design, setup.constants, dt);
        record();
    }

    return {world.live_cancer_count(), world.released_cargo_count(), world.cells_created(),
            world.cells_killed_by_drug(), world.clock()};
}

/// Objective value of a replicate: live cancer cells left after treatment.
inline double remaining_cancer(const DesignParams& design, const SimulationSetup& setup,
                               RngStream seed) {
    return static_cast<double>(simulate(design, setup, seed).live_cancer_cells);
}

}  // namespace devo::biorobots
