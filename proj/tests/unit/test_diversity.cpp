#include <catch2/catch_amalgamated.hpp>

#include "devo/diversity.hpp"
#include "devo/rng.hpp"

#include <vector>

using namespace devo;

TEST_CASE("diversity rejects an empty population", "[diversity]") {
    auto s = SearchSpace::from_bounds({{0.0, 1.0}});
    REQUIRE_THROWS_AS(diversity(s, {}), EmptyPopulation);
    REQUIRE_THROWS_AS(diversity(s, {{0.5}, {0.5, 0.5}}), DimensionMismatch);
}

TEST_CASE("a single member has zero diversity and no duplicates", "[diversity]") {
    auto s = SearchSpace::from_bounds({{0.0, 1.0}, {0.0, 1.0}});
    auto d = diversity(s, {{0.3, 0.7}});
    REQUIRE(d.mean_pairwise_distance == 0.0);
    REQUIRE(d.duplicate_count == 0);
}

TEST_CASE("a fully collapsed population counts P-1 duplicates", "[diversity]") {
    auto s = SearchSpace::from_bounds({{0.0, 1.0}, {0.0, 1.0}});
    std::vector<Genome> pop(20, Genome{0.25, 0.75});
    auto d = diversity(s, pop);
    REQUIRE(d.mean_pairwise_distance == 0.0);
    REQUIRE(d.duplicate_count == 19);
    REQUIRE(d.per_dimension_spread == std::vector<double>{0.0, 0.0});
}

TEST_CASE("near-duplicate chains collapse transitively", "[diversity]") {
    // a~b and b~c within tolerance, a and c slightly outside it on their own.
    auto s = SearchSpace::from_bounds({{0.0, 1.0}});
    const double tol = 1e-3;
    std::vector<Genome> pop = {{0.5000}, {0.5009}, {0.5018}, {0.9}};
    auto d = diversity(s, pop, tol);
    REQUIRE(d.duplicate_count == 2);  // the chain is one class of three
}

TEST_CASE("two distinct clusters of copies", "[diversity]") {
    auto s = SearchSpace::from_bounds({{0.0, 1.0}});
    std::vector<Genome> pop = {{0.1}, {0.1}, {0.1}, {0.9}, {0.9}};
    auto d = diversity(s, pop, 1e-9);
    REQUIRE(d.duplicate_count == 3);  // 5 members, 2 classes
    // 6 of 10 pairs are coincident, 4 span the 0.8 gap
    REQUIRE(d.mean_pairwise_distance == Catch::Approx(0.8 * 6.0 / 10.0));
    REQUIRE(d.per_dimension_spread[0] == Catch::Approx(0.8));
}

TEST_CASE("mean pairwise distance matches a brute-force recomputation", "[diversity]") {
    auto s = SearchSpace::from_bounds({{-3.0, 3.0}, {0.0, 10.0}, {1.0, 1.5}});
    RngStream rng(2601);
    std::vector<Genome> pop;
    for (int i = 0; i < 17; ++i) pop.push_back(sample_uniform(s, rng));

    double sum = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < pop.size(); ++i)
        for (std::size_t j = i + 1; j < pop.size(); ++j) {
            sum += normalized_distance(s, pop[i], pop[j]);
            ++pairs;
        }

    auto d = diversity(s, pop);
    REQUIRE(d.mean_pairwise_distance == Catch::Approx(sum / pairs).epsilon(1e-14));
    REQUIRE(d.duplicate_count == 0);
}

TEST_CASE("per-dimension spread is range-normalized", "[diversity]") {
    auto s = SearchSpace::from_bounds({{0.0, 10.0}, {5.0, 5.0}});
    std::vector<Genome> pop = {{2.0, 5.0}, {7.0, 5.0}, {4.0, 5.0}};
    auto d = diversity(s, pop);
    REQUIRE(d.per_dimension_spread[0] == Catch::Approx(0.5));
    REQUIRE(d.per_dimension_spread[1] == 0.0);  // zero-width dimension
}
