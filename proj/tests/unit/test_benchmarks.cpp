#include <catch2/catch_amalgamated.hpp>

#include "devo/objectives/benchmarks.hpp"
#include "devo/rng.hpp"

#include <cmath>

using namespace devo;
using namespace devo::objectives;

TEST_CASE("sphere values at hand-checked points", "[benchmarks]") {
    REQUIRE(sphere({}) == 0.0);
    REQUIRE(sphere({0.0, 0.0, 0.0}) == 0.0);
    REQUIRE(sphere({1.0, 2.0}) == 5.0);
    REQUIRE(sphere({-3.0}) == 9.0);
    REQUIRE(sphere({0.5, -0.5, 0.5, -0.5}) == 1.0);
}

TEST_CASE("rastrigin values at hand-checked points", "[benchmarks]") {
    REQUIRE(rastrigin({0.0}) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(rastrigin({0.0, 0.0, 0.0, 0.0, 0.0, 0.0}) == Catch::Approx(0.0).margin(1e-12));
    // cos(pi) = -1 so each half-integer coordinate contributes x^2 + 10
    REQUIRE(rastrigin({0.5}) == Catch::Approx(20.25));
    REQUIRE(rastrigin({1.0, 1.0}) == Catch::Approx(2.0));
    REQUIRE(rastrigin({-0.5, 0.5}) == Catch::Approx(40.5));
}

TEST_CASE("rastrigin is minimized at integer lattice points locally", "[benchmarks]") {
    // f(k) = k^2 for integer k; nudging off an integer raises the value
    for (double k : {-2.0, -1.0, 0.0, 1.0, 3.0}) {
        double at = rastrigin({k});
        REQUIRE(at == Catch::Approx(k * k).margin(1e-10));
        REQUIRE(rastrigin({k + 0.05}) > at);
        REQUIRE(rastrigin({k - 0.05}) > at);
    }
}

TEST_CASE("both benchmarks match independent recomputation on random points", "[benchmarks]") {
    auto space = benchmark_space(6);
    RngStream rng(117);
    for (int i = 0; i < 1000; ++i) {
        Genome g = sample_uniform(space, rng);

        double s = 0.0;
        for (double x : g) s += x * x;
        double r = 0.0;
        for (double x : g)
            r += x * x + 10.0 * (1.0 - std::cos(2.0 * std::acos(-1.0) * x));

        REQUIRE(sphere(g) == Catch::Approx(s).epsilon(1e-12));
        REQUIRE(rastrigin(g) == Catch::Approx(r).epsilon(1e-12));
        REQUIRE(sphere(g) >= 0.0);
        REQUIRE(rastrigin(g) >= 0.0);
    }
}

TEST_CASE("benchmark space is the conventional centered box", "[benchmarks]") {
    auto s = benchmark_space(4);
    REQUIRE(s.dim() == 4);
    for (std::size_t d = 0; d < 4; ++d) {
        REQUIRE(s.lo(d) == -5.12);
        REQUIRE(s.hi(d) == 5.12);
    }
    REQUIRE(s.dims()[3].name == "x3");
}
