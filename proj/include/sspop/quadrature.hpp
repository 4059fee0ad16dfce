#pragma once

#include "sspop/grid.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace sspop {

enum class Quadrature {
    right_sum,      // sum_{i=1}^{N} p_i ds
    trapezoid_star, // half weights at both ends
};

inline std::string_view to_string(Quadrature q) {
    return q == Quadrature::right_sum ? "right_sum" : "trapezoid_star";
}

/// Weight of node i, in units of ds.
inline double quadrature_weight(Quadrature rule, std::size_t i, std::size_t n_cells) noexcept {
    if (rule == Quadrature::right_sum) return i == 0 ? 0.0 : 1.0;
    return (i == 0 || i == n_cells) ? 0.5 : 1.0;
}

inline double right_sum(std::span<const double> p, const Mesh& mesh) {
    require_on_mesh(p, mesh);
    double sum = 0.0;
    for (std::size_t i = 1; i < p.size(); ++i) sum += p[i];
    return sum * mesh.ds();
}

inline double trapezoid_star(std::span<const double> p, const Mesh& mesh) {
    require_on_mesh(p, mesh);
    const std::size_t n = mesh.n_cells();
    double sum = 0.5 * (p[0] + p[n]);
    for (std::size_t i = 1; i < n; ++i) sum += p[i];
    return sum * mesh.ds();
}

inline double right_sum(const GridFunction& p, const Mesh& mesh) { return right_sum(p.values(), mesh); }
inline double trapezoid_star(const GridFunction& p, const Mesh& mesh) { return trapezoid_star(p.values(), mesh); }

inline double integrate(Quadrature rule, std::span<const double> p, const Mesh& mesh) {
    return rule == Quadrature::right_sum ? right_sum(p, mesh) : trapezoid_star(p, mesh);
}

/// The part of [0,1] a quadrature node stands for, and its weight.
struct QuadratureCell {
    double node = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double weight = 0.0; // already multiplied by ds
};

/// Right sums attribute [s_{j-1}, s_j] to node j (node 0 gets nothing); the star sum
/// attributes [s_j - ds/2, s_j + ds/2] clipped to [0,1].
inline std::vector<QuadratureCell> quadrature_cells(const Mesh& mesh, Quadrature rule) {
    const std::size_t n = mesh.n_cells();
    const double ds = mesh.ds();
    std::vector<QuadratureCell> cells(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        QuadratureCell& c = cells[j];
        c.node = mesh.node(j);
        c.weight = quadrature_weight(rule, j, n) * ds;
        if (rule == Quadrature::right_sum) {
            c.lo = j == 0 ? 0.0 : mesh.node(j - 1);
            c.hi = c.node;
        } else {
            c.lo = j == 0 ? 0.0 : c.node - 0.5 * ds;
            c.hi = j == n ? 1.0 : c.node + 0.5 * ds;
        }
    }
    return cells;
}

} // namespace sspop
