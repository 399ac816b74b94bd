#pragma once

#include <cmath>
#include <numbers>

#include "devo/search_space.hpp"

namespace devo::objectives {

/// Sum of squares; global minimum 0 at the origin.
inline double sphere(const Genome& g) {
    double sum = 0.0;
    for (double x : g) sum += x * x;
    return sum;
}

/// 10*D + sum(x^2 - 10*cos(2*pi*x)); highly multimodal, global minimum 0 at
/// the origin.
inline double rastrigin(const Genome& g) {
    double sum = 10.0 * static_cast<double>(g.size());
    for (double x : g)
        sum += x * x - 10.0 * std::cos(2.0 * std::numbers::pi * x);
    return sum;
}

/// Conventional benchmark box [-5.12, 5.12]^D.
inline SearchSpace benchmark_space(std::size_t dim) {
    std::vector<Dimension> dims;
    dims.reserve(dim);
    for (std::size_t d = 0; d < dim; ++d)
        dims.push_back({"x" + std::to_string(d), -5.12, 5.12, ""});
    return SearchSpace(std::move(dims));
}

}  // namespace devo::objectives
