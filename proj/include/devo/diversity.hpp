#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "devo/errors.hpp"
#include "devo/search_space.hpp"

namespace devo {

struct DiversityStats {
    double mean_pairwise_distance = 0.0;   // normalized, in [0, 1]
    int duplicate_count = 0;               // P minus number of distinct members
    std::vector<double> per_dimension_spread;  // (max - min) / range per dimension
};

namespace detail {

// Union-find over population indices; duplicates are the transitive closure
// of "within dup_tol", so chains of near-identical members collapse to one
// equivalence class.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }
    std::size_t count_roots() {
        std::size_t n = 0;
        for (std::size_t i = 0; i < parent_.size(); ++i)
            if (find(i) == i) ++n;
        return n;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace detail

/// Population diversity: mean over all unordered pairs of normalized_distance,
/// duplicate count under dup_tol, and per-dimension spread.
inline DiversityStats diversity(const SearchSpace& space, const std::vector<Genome>& pop,
                                double dup_tol = 1e-9) {
    if (pop.empty()) throw EmptyPopulation("diversity of an empty population");
    for (const auto& g : pop) space.require_same_dim(g);

    DiversityStats stats;
    const std::size_t n = pop.size();

    double sum = 0.0;
    detail::DisjointSets sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dist = normalized_distance(space, pop[i], pop[j]);
            sum += dist;
            if (dist <= dup_tol) sets.unite(i, j);
        }
    }
    const std::size_t pairs = n * (n - 1) / 2;
    stats.mean_pairwise_distance = pairs ? sum / static_cast<double>(pairs) : 0.0;
    stats.duplicate_count = static_cast<int>(n - sets.count_roots());

    stats.per_dimension_spread.resize(space.dim());
    for (std::size_t d = 0; d < space.dim(); ++d) {
        double min = pop[0][d];
        double max = pop[0][d];
        for (const auto& g : pop) {
            min = std::min(min, g[d]);
            max = std::max(max, g[d]);
        }
        const double w = space.width(d);
        stats.per_dimension_spread[d] = w > 0.0 ? (max - min) / w : 0.0;
    }
    return stats;
}

}  // namespace devo
