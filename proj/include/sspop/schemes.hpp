#pragma once

#include "sspop/coefficients.hpp"
#include "sspop/error.hpp"
#include "sspop/grid.hpp"
#include "sspop/quadrature.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sspop {

enum class Scheme {
    FOEU,      // first-order explicit upwind
    SOEM,      // second-order explicit minmod MUSCL
    SOEU,      // second-order explicit upwind
    SOEM_CSSM, // SOEM with boundary recruitment
};

inline std::string_view to_string(Scheme s) {
    switch (s) {
    case Scheme::FOEU: return "FOEU";
    case Scheme::SOEM: return "SOEM";
    case Scheme::SOEU: return "SOEU";
    case Scheme::SOEM_CSSM: return "SOEM_CSSM";
    }
    return "?";
}

inline Scheme parse_scheme(std::string_view name) {
    for (Scheme s : {Scheme::FOEU, Scheme::SOEM, Scheme::SOEU, Scheme::SOEM_CSSM})
        if (to_string(s) == name) return s;
    throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

/// Quadrature used for Q and for the recruitment integral.
inline Quadrature quadrature_for(Scheme s) noexcept {
    return s == Scheme::FOEU ? Quadrature::right_sum : Quadrature::trapezoid_star;
}

inline void check_compatible(Scheme scheme, const CoefficientSet& coeffs) {
    const bool boundary = scheme == Scheme::SOEM_CSSM;
    if (boundary && coeffs.distributed())
        throw ConfigError(std::string(to_string(scheme)) + " needs boundary recruitment, '" + coeffs.name +
                          "' is distributed");
    if (!boundary && !coeffs.distributed())
        throw ConfigError(std::string(to_string(scheme)) + " needs distributed recruitment, '" + coeffs.name +
                          "' recruits at the boundary");
}

inline double minmod(double a, double b) noexcept {
    auto sign = [](double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); };
    return 0.5 * (sign(a) + sign(b)) * std::min(std::abs(a), std::abs(b));
}

/// Entry i holds f_{i+1/2} for i = 0..N. MUSCL values at i = 2..N-2, first-order gamma_i p_i elsewhere.
inline std::vector<double> numerical_flux(std::span<const double> p, std::span<const double> gamma) {
    if (p.size() != gamma.size()) throw InputError("flux needs density and growth on the same nodes");
    const std::size_t n = p.size() - 1;
    std::vector<double> f(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        f[i] = gamma[i] * p[i];
        if (i >= 2 && i + 2 <= n)
            f[i] += 0.5 * (gamma[i + 1] - gamma[i]) * p[i] +
                    0.5 * gamma[i] * minmod(p[i + 1] - p[i], p[i] - p[i - 1]);
    }
    return f;
}

inline std::vector<double> numerical_flux(const GridFunction& p, std::span<const double> gamma, const Mesh& mesh) {
    require_on_mesh(p.values(), mesh);
    require_on_mesh(gamma, mesh, "growth array");
    return numerical_flux(p.values(), gamma);
}

/// Coefficients of the compact MUSCL form
///   f_{i+1/2} - f_{i-1/2} = B_i (p_i - p_{i-1}) + D_i p_{i-1},  i = 1..N,
/// with every limiter ratio 0/0 taken as 0. Entry 0 is unused.
struct MusclCoefficients {
    std::vector<double> b;
    std::vector<double> d;
};

inline MusclCoefficients muscl_coefficients(std::span<const double> p, std::span<const double> gamma) {
    if (p.size() != gamma.size() || p.size() < Mesh::kMinCells + 1)
        throw InputError("compact coefficients need matching arrays on at least 6 nodes");
    const std::size_t n = p.size() - 1;
    auto muscl = [n](std::size_t i) { return i >= 2 && i + 2 <= n; };
    // f_{i+1/2} = a_i p_i + gamma_i m_i / 2
    auto a = [&](std::size_t i) { return muscl(i) ? 0.5 * (gamma[i + 1] + gamma[i]) : gamma[i]; };
    auto m = [&](std::size_t i) { return muscl(i) ? minmod(p[i + 1] - p[i], p[i] - p[i - 1]) : 0.0; };
    auto ratio = [](double num, double den) { return den == 0.0 ? 0.0 : num / den; };

    MusclCoefficients out{std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0)};
    for (std::size_t i = 1; i <= n; ++i) {
        const double jump = p[i] - p[i - 1];
        out.b[i] = a(i) + 0.5 * gamma[i] * ratio(m(i), jump) - 0.5 * gamma[i - 1] * ratio(m(i - 1), jump);
        out.d[i] = a(i) - a(i - 1);
    }
    return out;
}

namespace detail {

// One scheme bound to one coefficient set and mesh, with reusable work arrays.
class Stepper {
public:
    Stepper(Scheme scheme, const CoefficientSet& coeffs, const Mesh& mesh)
        : scheme_(scheme), coeffs_(coeffs), mesh_(mesh), rule_(quadrature_for(scheme)) {
        check_compatible(scheme, coeffs);
        const std::size_t n = mesh.n_nodes();
        nodes_.resize(n);
        for (std::size_t i = 0; i < n; ++i) nodes_[i] = mesh.node(i);
        gamma_.resize(n);
        mu_.resize(n);
        source_.assign(n, 0.0);
        if (coeffs.distributed()) recruitment_ = coeffs.kernel().discretize(mesh, rule_);
    }

    double total(std::span<const double> p) const { return integrate(rule_, p, mesh_); }

    std::vector<double> advance(std::span<const double> p) {
        const std::size_t n = mesh_.n_cells();
        const double dt = mesh_.dt();
        const double lam = dt / mesh_.ds();
        const double q = total(p);
        for (std::size_t i = 0; i <= n; ++i) {
            gamma_[i] = coeffs_.growth(nodes_[i], q);
            mu_[i] = coeffs_.mortality(nodes_[i], q);
        }
        if (recruitment_) recruitment_->apply(p, q, source_);

        std::vector<double> next(n + 1, 0.0);
        switch (scheme_) {
        case Scheme::FOEU:
            for (std::size_t i = 1; i <= n; ++i)
                next[i] = lam * gamma_[i - 1] * p[i - 1] + (1.0 - lam * gamma_[i] - mu_[i] * dt) * p[i] +
                          source_[i] * dt;
            break;
        case Scheme::SOEM:
        case Scheme::SOEM_CSSM: {
            const std::vector<double> f = numerical_flux(p, gamma_);
            for (std::size_t i = 1; i <= n; ++i)
                next[i] = p[i] - lam * (f[i] - f[i - 1]) - mu_[i] * p[i] * dt + source_[i] * dt;
            break;
        }
        case Scheme::SOEU: {
            auto f = [&](std::size_t i) { return gamma_[i] * p[i]; };
            for (std::size_t i = 1; i <= n; ++i) {
                double diff = 0.0;
                if (i == 1)
                    diff = f(1) - f(0);
                else if (i == 2)
                    diff = 0.5 * (3.0 * f(2) - 4.0 * f(1) + f(0));
                else
                    diff = 0.5 * (3.0 * f(i) - 4.0 * f(i - 1) + f(i - 2));
                next[i] = p[i] - lam * diff - mu_[i] * p[i] * dt + source_[i] * dt;
            }
            break;
        }
        }
        if (scheme_ == Scheme::SOEM_CSSM) {
            next[0] = p[0];
            next[0] = boundary_value(next);
        }
        return next;
    }

    /// p_0 from gamma(0, Q) p_0 = star sum of beta_tilde(., Q) p, with Q taken from p itself.
    double boundary_value(std::span<const double> p) const {
        const double q = trapezoid_star(p, mesh_);
        const RateFunction& fert = coeffs_.boundary_fertility();
        const std::size_t n = mesh_.n_cells();
        double inflow = 0.0;
        for (std::size_t j = 0; j <= n; ++j)
            inflow += quadrature_weight(Quadrature::trapezoid_star, j, n) * fert(nodes_[j], q) * p[j];
        inflow *= mesh_.ds();
        const double g0 = coeffs_.growth(0.0, q);
        if (g0 == 0.0) {
            if (inflow == 0.0) return 0.0;
            throw SingularBoundaryError("growth vanishes at s = 0 while the recruitment inflow is " +
                                        std::to_string(inflow));
        }
        return inflow / g0;
    }

private:
    Scheme scheme_;
    const CoefficientSet& coeffs_;
    Mesh mesh_;
    Quadrature rule_;
    std::unique_ptr<DiscreteRecruitment> recruitment_;
    std::vector<double> nodes_, gamma_, mu_, source_;
};

inline void require_finite(const std::vector<double>& level, std::size_t step, double time) {
    for (std::size_t i = 0; i < level.size(); ++i)
        if (!std::isfinite(level[i])) throw BlowUpError(step, time, "node " + std::to_string(i) + " is not finite");
}

} // namespace detail

/// One step of the given scheme from p.
inline GridFunction step(Scheme scheme, const GridFunction& p, const CoefficientSet& coeffs, const Mesh& mesh) {
    require_on_mesh(p.values(), mesh);
    detail::Stepper stepper(scheme, coeffs, mesh);
    std::vector<double> next = stepper.advance(p.values());
    detail::require_finite(next, 1, mesh.time(1));
    return GridFunction(std::move(next));
}

inline GridFunction foeu_step(const GridFunction& p, const CoefficientSet& c, const Mesh& mesh) {
    return step(Scheme::FOEU, p, c, mesh);
}

inline GridFunction soem_step(const GridFunction& p, const CoefficientSet& c, const Mesh& mesh) {
    return step(Scheme::SOEM, p, c, mesh);
}

inline GridFunction soeu_step(const GridFunction& p, const CoefficientSet& c, const Mesh& mesh) {
    return step(Scheme::SOEU, p, c, mesh);
}

inline GridFunction soem_cssm_step(const GridFunction& p, const CoefficientSet& c, const Mesh& mesh) {
    return step(Scheme::SOEM_CSSM, p, c, mesh);
}

/// Boundary density p_0 of the CSSM for the level p.
inline double cssm_boundary(const GridFunction& p, const CoefficientSet& coeffs, const Mesh& mesh) {
    require_on_mesh(p.values(), mesh);
    return detail::Stepper(Scheme::SOEM_CSSM, coeffs, mesh).boundary_value(p.values());
}

enum class CflPolicy { strict, warn };

struct SolveOptions {
    CflPolicy cfl_policy = CflPolicy::strict;
    /// Levels k with k % snapshot_stride == 0 are stored; the final level is always kept.
    std::size_t snapshot_stride = 1;
    /// Overrides the coefficient set's constant for the CFL check.
    std::optional<double> bound_c;
    double blowup_threshold = 1e12;
    /// Receives the CFL warning under CflPolicy::warn.
    std::function<void(const std::string&)> on_warning;
};

struct Snapshot {
    std::size_t step = 0;
    double time = 0.0;
    GridFunction level;
};

struct LevelDiagnostics {
    double l1 = 0.0;
    double linf = 0.0;
    double tv = 0.0;
};

struct Trajectory {
    Scheme scheme;
    Mesh mesh;
    double bound_c = 0.0;
    bool cfl_satisfied = true;
    std::vector<Snapshot> snapshots;
    std::vector<double> q_series;                 // k = 0..L
    std::vector<LevelDiagnostics> diagnostics;    // k = 0..L
    GridFunction final_level;

    bool stores_all_levels() const noexcept { return snapshots.size() == q_series.size(); }
};

/// Runs L steps from p0. DSSM schemes start from p0 with node 0 set to 0, the boundary
/// value every later level has as well.
inline Trajectory solve(Scheme scheme, const CoefficientSet& coeffs, const GridFunction& p0, const Mesh& mesh,
                        const SolveOptions& options = {}) {
    require_on_mesh(p0.values(), mesh, "initial condition");
    check_compatible(scheme, coeffs);
    if (options.snapshot_stride == 0) throw ConfigError("snapshot_stride must be at least 1");
    for (double v : p0)
        if (v < 0.0) throw InputError("initial condition must be nonnegative");

    Trajectory traj{scheme, mesh, 0.0, true, {}, {}, {}, {}};
    traj.bound_c = options.bound_c ? *options.bound_c : effective_bound_constant(coeffs);
    traj.cfl_satisfied = cfl_check(traj.bound_c, mesh);
    if (!traj.cfl_satisfied) {
        const std::string msg = "CFL condition fails for c = " + std::to_string(traj.bound_c) + ", ds = " +
                                std::to_string(mesh.ds()) + ", dt = " + std::to_string(mesh.dt());
        if (options.cfl_policy == CflPolicy::strict) throw ConfigError(msg);
        if (options.on_warning) options.on_warning(msg);
    }

    std::vector<double> level = p0.vector();
    if (scheme != Scheme::SOEM_CSSM) level[0] = 0.0;

    detail::Stepper stepper(scheme, coeffs, mesh);
    const std::size_t n_steps = mesh.n_steps();
    traj.q_series.reserve(n_steps + 1);
    traj.diagnostics.reserve(n_steps + 1);

    auto record = [&](std::size_t k) {
        traj.q_series.push_back(stepper.total(level));
        traj.diagnostics.push_back({l1_norm(level, mesh), linf_norm(level), total_variation(level)});
        if (k % options.snapshot_stride == 0) traj.snapshots.push_back({k, mesh.time(k), GridFunction(level)});
    };

    record(0);
    for (std::size_t k = 0; k < n_steps; ++k) {
        std::vector<double> next = stepper.advance(level);
        detail::require_finite(next, k + 1, mesh.time(k + 1));
        const double q = stepper.total(next);
        if (q > options.blowup_threshold)
            throw BlowUpError(k + 1, mesh.time(k + 1), "total population " + std::to_string(q) + " exceeds " +
                                                           std::to_string(options.blowup_threshold));
        level = std::move(next);
        record(k + 1);
    }
    traj.final_level = GridFunction(std::move(level));
    return traj;
}

} // namespace sspop
