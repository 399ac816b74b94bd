#include <catch2/catch_amalgamated.hpp>

#include "devo/biorobots/simulate.hpp"

#include <vector>

using namespace devo;
using namespace devo::biorobots;

namespace {

SimulationSetup quick_setup() {
    SimulationSetup setup = SimulationSetup::desk_scale();
    setup.schedule.growth_duration = 60.0;
    setup.schedule.treatment_duration = 30.0;
    setup.schedule.worker_count = 25;
    setup.schedule.cargo_count = 25;
    return setup;
}

}  // namespace

TEST_CASE("a replicate runs the full timeline and traces every step", "[simulate]") {
    SimulationSetup setup = quick_setup();
    std::vector<TraceRow> trace;
    SimulationResult res = simulate(DesignParams{}, setup, RngStream(21), &trace);

    REQUIRE(res.duration == 90.0);
    REQUIRE(res.live_cancer_cells > 0);
    REQUIRE(res.cells_created >= res.live_cancer_cells);

    // one row per step plus the initial state
    REQUIRE(trace.size() == 1 + 60 + 30);
    REQUIRE(trace.front().t == 0.0);
    REQUIRE(trace.back().t == 90.0);
    for (std::size_t i = 1; i < trace.size(); ++i) {
        REQUIRE(trace[i].t > trace[i - 1].t);
        REQUIRE(trace[i].released_cargo >= trace[i - 1].released_cargo);
    }
    // nothing can release before the swarm exists
    REQUIRE(trace[60].released_cargo == 0);
    REQUIRE(trace.back().released_cargo == res.released_cargo);
    REQUIRE(trace.back().live_cells == res.live_cancer_cells);
}

TEST_CASE("replicates are pure functions of design, setup and seed", "[simulate]") {
    SimulationSetup setup = quick_setup();
    DesignParams design = DesignParams::from_genome({0.9, 0.3, 1.0, 6.0, 2.0, 14.0});

    SimulationResult a = simulate(design, setup, RngStream(1001));
    SimulationResult b = simulate(design, setup, RngStream(1001));
    REQUIRE(a.live_cancer_cells == b.live_cancer_cells);
    REQUIRE(a.released_cargo == b.released_cargo);
    REQUIRE(a.cells_created == b.cells_created);
    REQUIRE(a.cells_killed_by_drug == b.cells_killed_by_drug);

    SimulationResult c = simulate(design, setup, RngStream(1002));
    const bool differs = c.live_cancer_cells != a.live_cancer_cells ||
                         c.cells_created != a.cells_created ||
                         c.released_cargo != a.released_cargo;
    REQUIRE(differs);
}

TEST_CASE("remaining_cancer counts survivors", "[simulate]") {
    SimulationSetup setup = quick_setup();
    DesignParams design;
    SimulationResult res = simulate(design, setup, RngStream(404));
    REQUIRE(remaining_cancer(design, setup, RngStream(404)) ==
            static_cast<double>(res.live_cancer_cells));
}

TEST_CASE("a working design beats a disarmed one", "[simulate]") {
    // threshold 0 never releases drug, so its survivor count is an upper
    // bound for a design that actually delivers
    SimulationSetup setup = SimulationSetup::desk_scale();
    DesignParams disarmed;
    disarmed.cargo_release_o2_threshold = 0.0;
    DesignParams active = DesignParams::from_genome({1.0, 0.5, 0.0, 5.0, 1.0, 8.0});

    for (std::uint64_t seed : {7ull, 11ull}) {
        SimulationResult off = simulate(disarmed, setup, RngStream(seed));
        SimulationResult on = simulate(active, setup, RngStream(seed));
        REQUIRE(off.released_cargo == 0);
        REQUIRE(off.cells_killed_by_drug == 0);
        REQUIRE(on.released_cargo > 0);
        REQUIRE(on.cells_killed_by_drug > 0);
        REQUIRE(on.live_cancer_cells < off.live_cancer_cells);
    }
}

TEST_CASE("trace is optional", "[simulate]") {
    SimulationSetup setup = quick_setup();
    setup.schedule.growth_duration = 10.0;
    setup.schedule.treatment_duration = 5.0;
    SimulationResult res = simulate(DesignParams{}, setup, RngStream(3));
    REQUIRE(res.duration == 15.0);
}
