#pragma once

#include "sspop/error.hpp"
#include "sspop/grid.hpp"
#include "sspop/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sspop {

/// Sum over i = 1..N of |p_i - exact(s_i)| ds.
inline double l1_error(const GridFunction& p, const std::function<double(double)>& exact, const Mesh& mesh) {
    require_on_mesh(p.values(), mesh);
    double sum = 0.0;
    for (std::size_t i = 1; i <= mesh.n_cells(); ++i) sum += std::abs(p[i] - exact(mesh.node(i)));
    return sum * mesh.ds();
}

/// Observed order between two runs whose step sizes differ by a factor of two.
inline double order_from_errors(double e_coarse, double e_fine) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0)) throw DomainError("orders need positive errors");
    return std::log2(e_coarse / e_fine);
}

struct SchemeError {
    double l1_error = 0.0;
    std::optional<double> order; // empty on the first row
};

struct ConvergenceRow {
    std::size_t n_cells = 0;
    std::size_t n_steps = 0;
    SchemeError foeu;
    SchemeError soeu;
    SchemeError soem;
};

/// One checked inequality value <= limit.
struct BoundCheck {
    bool applicable = false;
    double value = 0.0;
    double limit = 0.0;

    double margin() const noexcept { return limit - value; }
    // Rounding slack proportional to the size of the terms involved.
    bool holds() const noexcept {
        return !applicable || value <= limit + 1e-12 * std::max({std::abs(limit), std::abs(value), 1e-300});
    }
};

enum class InvariantKind { nonnegativity, boundary_zero, l1_growth, linf_growth, tv_recursion, time_lipschitz };

inline std::string_view to_string(InvariantKind k) {
    switch (k) {
    case InvariantKind::nonnegativity: return "nonnegativity";
    case InvariantKind::boundary_zero: return "boundary_zero";
    case InvariantKind::l1_growth: return "l1_growth";
    case InvariantKind::linf_growth: return "linf_growth";
    case InvariantKind::tv_recursion: return "tv_recursion";
    case InvariantKind::time_lipschitz: return "time_lipschitz";
    }
    return "?";
}

inline constexpr std::size_t kInvariantKinds = 6;

/// Checks of level k; the growth bounds compare level k with level k-1 and are not
/// applicable at k = 0.
struct StepRecord {
    std::size_t step = 0;
    BoundCheck nonnegativity;  // value = -min p, limit = 0
    BoundCheck boundary_zero;  // value = |p_0|, limit = 0
    BoundCheck l1_growth;
    BoundCheck linf_growth;
    BoundCheck tv_recursion;
    BoundCheck time_lipschitz;

    const BoundCheck& get(InvariantKind k) const {
        switch (k) {
        case InvariantKind::nonnegativity: return nonnegativity;
        case InvariantKind::boundary_zero: return boundary_zero;
        case InvariantKind::l1_growth: return l1_growth;
        case InvariantKind::linf_growth: return linf_growth;
        case InvariantKind::tv_recursion: return tv_recursion;
        case InvariantKind::time_lipschitz: return time_lipschitz;
        }
        return nonnegativity;
    }
};

struct Violation {
    std::size_t step = 0;
    InvariantKind kind{};
    double value = 0.0;
    double limit = 0.0;
};

struct InvariantReport {
    std::vector<StepRecord> steps;
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }

    std::size_t count(InvariantKind kind) const {
        return static_cast<std::size_t>(
            std::count_if(violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; }));
    }

    /// Smallest margin over all applicable checks of one kind; nullopt if none applied.
    std::optional<double> worst_margin(InvariantKind kind) const {
        std::optional<double> worst;
        for (const StepRecord& r : steps) {
            const BoundCheck& b = r.get(kind);
            if (b.applicable) worst = worst ? std::min(*worst, b.margin()) : b.margin();
        }
        return worst;
    }
};

/// Per-step verification of the a-priori bounds of the FOEU and SOEM schemes with constant c.
/// SOEU has no proved bounds beyond positivity; SOEM_CSSM has no boundary-zero property.
inline InvariantReport monitor_invariants(const Trajectory& traj, double c, const Mesh& mesh) {
    if (!traj.stores_all_levels()) throw InputError("invariant monitoring needs every level stored");
    for (const Snapshot& s : traj.snapshots) require_on_mesh(s.level.values(), mesh, "trajectory level");

    const Scheme scheme = traj.scheme;
    const bool proved_bounds = scheme == Scheme::FOEU || scheme == Scheme::SOEM;
    const double dt = mesh.dt();
    const double ds = mesh.ds();

    InvariantReport report;
    report.steps.reserve(traj.snapshots.size());
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        const GridFunction& p = traj.snapshots[k].level;
        StepRecord r;
        r.step = k;
        const double min_p = *std::min_element(p.begin(), p.end());
        r.nonnegativity = {true, -min_p, 0.0};
        if (scheme != Scheme::SOEM_CSSM) r.boundary_zero = {true, std::abs(p[0]), 0.0};

        if (k > 0 && proved_bounds) {
            const GridFunction& prev = traj.snapshots[k - 1].level;
            const double l1_prev = l1_norm(prev, mesh);
            const double linf_prev = linf_norm(prev);
            const double tv_prev = total_variation(prev);
            double change = 0.0;
            for (std::size_t i = 1; i <= mesh.n_cells(); ++i) change += std::abs(p[i] - prev[i]);
            change *= ds / dt;

            r.l1_growth = {true, l1_norm(p, mesh), (1.0 + c * dt) * l1_prev};
            if (scheme == Scheme::FOEU) {
                r.linf_growth = {true, linf_norm(p), (1.0 + 2.0 * c * dt) * linf_prev};
                r.tv_recursion = {true, total_variation(p), (1.0 + 2.0 * c * dt) * tv_prev + 5.0 * c * l1_prev * dt};
                r.time_lipschitz = {true, change, c * tv_prev + 3.0 * c * l1_prev};
            } else {
                r.linf_growth = {true, linf_norm(p), (1.0 + 2.5 * c * dt) * linf_prev};
                r.tv_recursion = {true, total_variation(p),
                                  (1.0 + 2.5 * c * dt) * tv_prev + (4.0 * c * l1_prev + 12.0 * c * linf_prev) * dt};
                r.time_lipschitz = {true, change, 1.5 * c * tv_prev + 3.5 * c * l1_prev};
            }
        }

        for (std::size_t kind = 0; kind < kInvariantKinds; ++kind) {
            const auto ik = static_cast<InvariantKind>(kind);
            const BoundCheck& b = r.get(ik);
            if (!b.holds()) report.violations.push_back({k, ik, b.value, b.limit});
        }
        report.steps.push_back(r);
    }
    return report;
}

} // namespace sspop
