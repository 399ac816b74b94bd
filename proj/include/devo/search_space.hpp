#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "devo/errors.hpp"
#include "devo/rng.hpp"

namespace devo {

/// A candidate design: one real value per search-space dimension.
using Genome = std::vector<double>;

struct Dimension {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    std::string unit;
};

/// Axis-aligned feasible box. Bounds are validated once at construction and
/// immutable afterwards; zero-width dimensions are legal (frozen parameters).
class SearchSpace {
public:
    explicit SearchSpace(std::vector<Dimension> dims) : dims_(std::move(dims)) {
        if (dims_.empty())
            throw EmptySpaceError("search space needs at least one dimension");
        for (std::size_t d = 0; d < dims_.size(); ++d) {
            const auto& dim = dims_[d];
            if (!std::isfinite(dim.lo) || !std::isfinite(dim.hi))
                throw BoundsError("non-finite bound in dimension " + index_name(d));
            if (dim.lo > dim.hi)
                throw BoundsError("lo > hi in dimension " + index_name(d));
        }
    }

    static SearchSpace from_bounds(const std::vector<std::pair<double, double>>& bounds) {
        std::vector<Dimension> dims;
        dims.reserve(bounds.size());
        for (std::size_t d = 0; d < bounds.size(); ++d)
            dims.push_back({"x" + std::to_string(d), bounds[d].first, bounds[d].second, ""});
        return SearchSpace(std::move(dims));
    }

    [[nodiscard]] std::size_t dim() const { return dims_.size(); }
    [[nodiscard]] const std::vector<Dimension>& dims() const { return dims_; }
    [[nodiscard]] double lo(std::size_t d) const { return dims_[d].lo; }
    [[nodiscard]] double hi(std::size_t d) const { return dims_[d].hi; }
    [[nodiscard]] double width(std::size_t d) const { return dims_[d].hi - dims_[d].lo; }

    [[nodiscard]] bool contains(const Genome& g) const {
        if (g.size() != dims_.size()) return false;
        for (std::size_t d = 0; d < g.size(); ++d)
            if (!(g[d] >= dims_[d].lo && g[d] <= dims_[d].hi)) return false;
        return true;
    }

    void require_same_dim(const Genome& g) const {
        if (g.size() != dims_.size())
            throw DimensionMismatch("genome has " + std::to_string(g.size()) +
                                    " components, space has " + std::to_string(dims_.size()));
    }

private:
    static std::string index_name(std::size_t d) { return std::to_string(d); }

    std::vector<Dimension> dims_;
};

/// One independent uniform draw per dimension.
inline Genome sample_uniform(const SearchSpace& space, RngStream& rng) {
    Genome g(space.dim());
    for (std::size_t d = 0; d < g.size(); ++d)
        g[d] = rng.uniform(space.lo(d), space.hi(d));
    return g;
}

/// Projects each component onto its bounds; feasible components pass through
/// unchanged, so the operation is idempotent.
inline Genome repair_clamp(const SearchSpace& space, const std::vector<double>& v) {
    space.require_same_dim(v);
    Genome g(v);
    for (std::size_t d = 0; d < g.size(); ++d) {
        if (g[d] < space.lo(d)) g[d] = space.lo(d);
        else if (g[d] > space.hi(d)) g[d] = space.hi(d);
    }
    return g;
}

/// Euclidean distance of range-normalized coordinates divided by sqrt(D),
/// so any two points of the box are at most 1 apart. Zero-width dimensions
/// contribute 0.
inline double normalized_distance(const SearchSpace& space, const Genome& a, const Genome& b) {
    space.require_same_dim(a);
    space.require_same_dim(b);
    double sum = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double w = space.width(d);
        if (w <= 0.0) continue;
        const double t = (a[d] - b[d]) / w;
        sum += t * t;
    }
    return std::sqrt(sum / static_cast<double>(space.dim()));
}

}  // namespace devo
