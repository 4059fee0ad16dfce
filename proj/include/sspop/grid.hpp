#pragma once

#include "sspop/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sspop {

/// Uniform grid on [0,1] x [0,T] with N cells in size and L steps in time.
class Mesh {
public:
    static constexpr std::size_t kMinCells = 5;

    /// n_steps = 0 is accepted and describes a run that only holds the initial level.
    Mesh(std::size_t n_cells, std::size_t n_steps, double horizon)
        : n_cells_(n_cells), n_steps_(n_steps), horizon_(horizon) {
        if (n_cells < kMinCells)
            throw InputError("mesh needs at least " + std::to_string(kMinCells) + " cells, got " +
                             std::to_string(n_cells));
        if (!(horizon > 0.0) || !std::isfinite(horizon))
            throw InputError("mesh horizon must be positive and finite");
        ds_ = 1.0 / static_cast<double>(n_cells);
        dt_ = n_steps == 0 ? 0.0 : horizon / static_cast<double>(n_steps);
    }

    std::size_t n_cells() const noexcept { return n_cells_; }
    std::size_t n_steps() const noexcept { return n_steps_; }
    std::size_t n_nodes() const noexcept { return n_cells_ + 1; }
    double horizon() const noexcept { return horizon_; }
    double ds() const noexcept { return ds_; }
    double dt() const noexcept { return dt_; }

    /// s_i; the last node is exactly 1.
    double node(std::size_t i) const noexcept {
        return static_cast<double>(i) / static_cast<double>(n_cells_);
    }

    /// t_k; the last level is exactly T.
    double time(std::size_t k) const noexcept {
        if (n_steps_ == 0) return 0.0;
        return horizon_ * static_cast<double>(k) / static_cast<double>(n_steps_);
    }

    /// Both step sizes halved.
    Mesh refined() const { return {2 * n_cells_, 2 * n_steps_, horizon_}; }

    friend bool operator==(const Mesh& a, const Mesh& b) noexcept {
        return a.n_cells_ == b.n_cells_ && a.n_steps_ == b.n_steps_ && a.horizon_ == b.horizon_;
    }

private:
    std::size_t n_cells_;
    std::size_t n_steps_;
    double horizon_;
    double ds_ = 0.0;
    double dt_ = 0.0;
};

/// Nodal values p_0..p_N of a density at one time level.
class GridFunction {
public:
    GridFunction() = default;

    explicit GridFunction(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) throw InputError("grid function needs at least one value");
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (!std::isfinite(values_[i]))
                throw InputError("grid function entry " + std::to_string(i) + " is not finite");
    }

    static GridFunction zeros(const Mesh& mesh) { return GridFunction(std::vector<double>(mesh.n_nodes(), 0.0)); }

    template <class F>
    static GridFunction sample(const Mesh& mesh, F&& f) {
        std::vector<double> v(mesh.n_nodes());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(mesh.node(i));
        return GridFunction(std::move(v));
    }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& vector() const noexcept { return values_; }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    bool defined_on(const Mesh& mesh) const noexcept { return values_.size() == mesh.n_nodes(); }

    friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
    std::vector<double> values_;
};

inline void require_on_mesh(std::span<const double> p, const Mesh& mesh, const char* what = "grid function") {
    if (p.size() != mesh.n_nodes())
        throw InputError(std::string(what) + " has " + std::to_string(p.size()) + " entries, mesh has " +
                         std::to_string(mesh.n_nodes()) + " nodes");
}

/// Sum over i = 1..N of |p_i| ds; node 0 is excluded.
inline double l1_norm(std::span<const double> p, const Mesh& mesh) {
    require_on_mesh(p, mesh);
    double sum = 0.0;
    for (std::size_t i = 1; i < p.size(); ++i) sum += std::abs(p[i]);
    return sum * mesh.ds();
}

inline double l1_norm(const GridFunction& p, const Mesh& mesh) { return l1_norm(p.values(), mesh); }

/// Max over all nodes including node 0.
inline double linf_norm(std::span<const double> p) {
    double m = 0.0;
    for (double v : p) m = std::max(m, std::abs(v));
    return m;
}

inline double linf_norm(const GridFunction& p) { return linf_norm(p.values()); }

inline double total_variation(std::span<const double> p) {
    double tv = 0.0;
    for (std::size_t i = 1; i < p.size(); ++i) tv += std::abs(p[i] - p[i - 1]);
    return tv;
}

inline double total_variation(const GridFunction& p) { return total_variation(p.values()); }

} // namespace sspop
