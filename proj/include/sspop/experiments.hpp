#pragma once

#include "sspop/analysis.hpp"
#include "sspop/hopf.hpp"
#include "sspop/presets.hpp"
#include "sspop/quadrature.hpp"
#include "sspop/schemes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <future>
#include <limits>
#include <string>
#include <vector>

namespace sspop {

struct ExperimentOptions {
    CflPolicy cfl_policy = CflPolicy::strict;
    /// Run independent solves of a sweep on separate threads; results keep input order.
    bool parallel = true;
    std::function<void(const std::string&)> on_warning;

    SolveOptions solve_options(std::size_t n_steps) const {
        SolveOptions o;
        o.cfl_policy = cfl_policy;
        o.snapshot_stride = std::max<std::size_t>(n_steps, 1);
        o.on_warning = on_warning;
        return o;
    }
};

namespace detail {

template <class R, class F>
std::vector<R> ordered_map(std::size_t count, F&& task, bool parallel) {
    std::vector<R> out;
    out.reserve(count);
    if (!parallel || count < 2) {
        for (std::size_t i = 0; i < count; ++i) out.push_back(task(i));
        return out;
    }
    std::vector<std::future<R>> pending;
    pending.reserve(count);
    for (std::size_t i = 0; i < count; ++i) pending.push_back(std::async(std::launch::async, task, i));
    for (auto& f : pending) out.push_back(f.get());
    return out;
}

inline std::string mesh_label(const Mesh& m) {
    return "N=" + std::to_string(m.n_cells()) + ", L=" + std::to_string(m.n_steps());
}

template <class F>
auto with_context(const std::string& context, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const BlowUpError& e) {
        throw e.with_context(context);
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Order of accuracy against the exact solution p = s e^t.

inline constexpr std::array<Scheme, 3> kValidationSchemes{Scheme::FOEU, Scheme::SOEU, Scheme::SOEM};

/// `rows` meshes starting at mesh0, each with both steps halved; errors at the final time.
inline std::vector<ConvergenceRow> run_validation(const Mesh& mesh0, std::size_t rows,
                                                  const ExperimentOptions& options = {}) {
    if (rows == 0) throw ConfigError("run_validation needs at least one row");
    const double t_end = mesh0.horizon();
    // The declared constant covers Q up to its exact maximum e^T / 2.
    const CoefficientSet coeffs =
        presets::validation(std::max(presets::kDefaultValidationQMax, 0.5 * std::exp(t_end)));

    std::vector<Mesh> meshes{mesh0};
    for (std::size_t r = 1; r < rows; ++r) meshes.push_back(meshes.back().refined());

    const std::size_t n_schemes = kValidationSchemes.size();
    auto task = [&](std::size_t idx) {
        const Mesh& mesh = meshes[idx / n_schemes];
        const Scheme scheme = kValidationSchemes[idx % n_schemes];
        return detail::with_context(detail::mesh_label(mesh) + ", " + std::string(to_string(scheme)), [&] {
            const GridFunction p0 = GridFunction::sample(mesh, [](double s) { return s; });
            const Trajectory traj = solve(scheme, coeffs, p0, mesh, options.solve_options(mesh.n_steps()));
            return l1_error(traj.final_level, [t_end](double s) { return presets::validation_exact(s, t_end); },
                            mesh);
        });
    };
    const std::vector<double> errors = detail::ordered_map<double>(rows * n_schemes, task, options.parallel);

    std::vector<ConvergenceRow> table;
    for (std::size_t r = 0; r < rows; ++r) {
        ConvergenceRow row;
        row.n_cells = meshes[r].n_cells();
        row.n_steps = meshes[r].n_steps();
        SchemeError* cols[] = {&row.foeu, &row.soeu, &row.soem};
        for (std::size_t s = 0; s < n_schemes; ++s) {
            cols[s]->l1_error = errors[r * n_schemes + s];
            if (r > 0) {
                const double coarse = errors[(r - 1) * n_schemes + s];
                const double fine = cols[s]->l1_error;
                if (coarse > 0.0 && fine > 0.0) cols[s]->order = order_from_errors(coarse, fine);
            }
        }
        table.push_back(row);
    }
    return table;
}

// ---------------------------------------------------------------------------
// Discontinuous data with the box recruitment kernel.

/// Position at time t of the characteristic of ds/dt = (1 - s)/2 that starts at s0.
inline double advected_position(double s0, double t) { return 1.0 - (1.0 - s0) * std::exp(-0.5 * t); }

/// Locations at time t of the two jumps of the initial step function, and of the jump
/// born at s = 0 from the mismatch of boundary and initial data.
inline std::array<double, 3> discontinuity_fronts(double t) {
    return {advected_position(0.25, t), advected_position(0.75, t), advected_position(0.0, t)};
}

/// Nodes strictly between lo + 0.1 (hi - lo) and lo + 0.9 (hi - lo), where lo and hi are
/// the extremes of p over [center - half_window, center + half_window].
inline std::size_t front_width(const GridFunction& p, const Mesh& mesh, double center, double half_window) {
    require_on_mesh(p.values(), mesh);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::vector<std::size_t> window;
    for (std::size_t i = 0; i <= mesh.n_cells(); ++i) {
        const double s = mesh.node(i);
        if (std::abs(s - center) > half_window) continue;
        window.push_back(i);
        lo = std::min(lo, p[i]);
        hi = std::max(hi, p[i]);
    }
    if (window.empty() || !(hi > lo)) return 0;
    const double a = lo + 0.1 * (hi - lo);
    const double b = lo + 0.9 * (hi - lo);
    return static_cast<std::size_t>(
        std::count_if(window.begin(), window.end(), [&](std::size_t i) { return p[i] > a && p[i] < b; }));
}

/// Window half-width for each of the two initial-data fronts: at most 0.1, and less than
/// half the distance to any other jump or to the ends of [0, 1].
inline std::array<double, 2> front_windows(double t) {
    const auto fronts = discontinuity_fronts(t);
    std::array<double, 2> out{};
    for (std::size_t f = 0; f < 2; ++f) {
        double gap = std::min(fronts[f], 1.0 - fronts[f]);
        for (std::size_t g = 0; g < fronts.size(); ++g)
            if (g != f) gap = std::min(gap, std::abs(fronts[f] - fronts[g]));
        out[f] = std::min(0.1, 0.45 * gap);
    }
    return out;
}

struct DiscontinuityResult {
    double m = 0.0;
    std::array<GridFunction, 3> profiles;                  // FOEU, SOEU, SOEM
    std::array<std::array<std::size_t, 2>, 3> front_widths; // per scheme, per initial-data front
};

inline std::vector<DiscontinuityResult> run_discontinuity(const std::vector<double>& m_values, const Mesh& mesh,
                                                          const ExperimentOptions& options = {}) {
    for (double m : m_values)
        if (!(m > 0.0)) throw ConfigError("discontinuity m values must be positive");
    const PresetId id0{"discontinuity", {}};
    const GridFunction p0 = GridFunction::sample(mesh, initial_condition(id0));
    const std::size_t n_schemes = kValidationSchemes.size();

    auto task = [&](std::size_t idx) {
        const double m = m_values[idx / n_schemes];
        const Scheme scheme = kValidationSchemes[idx % n_schemes];
        return detail::with_context("m=" + std::to_string(m) + ", " + std::string(to_string(scheme)), [&] {
            const CoefficientSet coeffs = make_preset({"discontinuity", {{"m", m}}});
            return solve(scheme, coeffs, p0, mesh, options.solve_options(mesh.n_steps())).final_level;
        });
    };
    const std::vector<GridFunction> finals =
        detail::ordered_map<GridFunction>(m_values.size() * n_schemes, task, options.parallel);

    const auto fronts = discontinuity_fronts(mesh.horizon());
    const auto windows = front_windows(mesh.horizon());
    std::vector<DiscontinuityResult> out;
    for (std::size_t k = 0; k < m_values.size(); ++k) {
        DiscontinuityResult r;
        r.m = m_values[k];
        for (std::size_t s = 0; s < n_schemes; ++s) {
            r.profiles[s] = finals[k * n_schemes + s];
            for (std::size_t f = 0; f < 2; ++f)
                r.front_widths[s][f] = front_width(r.profiles[s], mesh, fronts[f], windows[f]);
        }
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Distributed recruitment concentrating at s = 0 against boundary recruitment.

struct WeakStarResult {
    double b = 0.0;
    double l1_distance = 0.0;   // DSSM vs CSSM final profiles
    double q_distance = 0.0;    // |Q_b(T) - Q(T)|
    double normalization = 0.0; // star sum of the offspring density on the mesh
    GridFunction profile;
};

struct WeakStarStudy {
    double a = 0.0;
    GridFunction cssm_profile;
    double cssm_q = 0.0;
    std::vector<WeakStarResult> results;
};

inline WeakStarStudy run_weakstar(double a, const std::vector<double>& b_values, const Mesh& mesh,
                                  const ExperimentOptions& options = {}) {
    if (!(a > 1.0)) throw ConfigError("weakstar needs a > 1");
    for (double b : b_values)
        if (!(b > 1.0)) throw ConfigError("weakstar needs every b > 1");
    const GridFunction p0 = GridFunction::sample(mesh, initial_condition({"weakstar_dssm", {}}));

    // Task 0 is the boundary-recruitment run; task k > 0 the distributed run for b_values[k - 1].
    auto task = [&](std::size_t idx) {
        if (idx == 0)
            return detail::with_context("weakstar CSSM", [&] {
                return solve(Scheme::SOEM_CSSM, presets::weakstar_cssm(), p0, mesh,
                             options.solve_options(mesh.n_steps()));
            });
        const double b = b_values[idx - 1];
        return detail::with_context("weakstar b=" + std::to_string(b), [&] {
            return solve(Scheme::SOEM, presets::weakstar_dssm(a, b), p0, mesh, options.solve_options(mesh.n_steps()));
        });
    };
    const std::vector<Trajectory> runs = detail::ordered_map<Trajectory>(b_values.size() + 1, task, options.parallel);

    WeakStarStudy study;
    study.a = a;
    study.cssm_profile = runs[0].final_level;
    study.cssm_q = runs[0].q_series.back();
    for (std::size_t k = 0; k < b_values.size(); ++k) {
        const Trajectory& run = runs[k + 1];
        WeakStarResult r;
        r.b = b_values[k];
        std::vector<double> diff(mesh.n_nodes());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = run.final_level[i] - study.cssm_profile[i];
        r.l1_distance = l1_norm(diff, mesh);
        r.q_distance = std::abs(run.q_series.back() - study.cssm_q);
        const double b = r.b;
        r.normalization =
            trapezoid_star(GridFunction::sample(mesh, [a, b](double s) { return beta_pdf(s, a, b); }), mesh);
        r.profile = run.final_level;
        study.results.push_back(std::move(r));
    }
    return study;
}

// ---------------------------------------------------------------------------
// Oscillations of Q under the Hopf preset.

/// T = 40, N = 500 and the fewest steps with dt <= 0.4 ds.
inline Mesh default_hopf_mesh(double horizon = 40.0, std::size_t n_cells = 500) {
    const double ratio = horizon * static_cast<double>(n_cells) / 0.4;
    return {n_cells, static_cast<std::size_t>(std::ceil(ratio * (1.0 - 1e-12))), horizon};
}

inline constexpr double kDefaultTailFraction = 0.25;

struct BifurcationPoint {
    double a = 0.0;
    double q_max = 0.0;
    double q_min = 0.0;
    double amplitude = 0.0;
    double q_mean = 0.0;
};

/// Extremes and mean of q over its final tail_fraction.
inline BifurcationPoint tail_statistics(double a, const std::vector<double>& q, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) throw ConfigError("tail_fraction must lie in (0, 1)");
    if (q.empty()) throw InputError("empty Q series");
    const std::size_t last = q.size() - 1;
    const auto start = static_cast<std::size_t>(std::floor((1.0 - tail_fraction) * static_cast<double>(last)));
    BifurcationPoint p;
    p.a = a;
    p.q_max = *std::max_element(q.begin() + static_cast<std::ptrdiff_t>(start), q.end());
    p.q_min = *std::min_element(q.begin() + static_cast<std::ptrdiff_t>(start), q.end());
    p.amplitude = p.q_max - p.q_min;
    double sum = 0.0;
    for (std::size_t k = start; k <= last; ++k) sum += q[k];
    p.q_mean = sum / static_cast<double>(last - start + 1);
    return p;
}

inline std::vector<BifurcationPoint> run_bifurcation(const std::vector<double>& a_values, const Mesh& mesh,
                                                     double tail_fraction = kDefaultTailFraction,
                                                     const ExperimentOptions& options = {}) {
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) throw ConfigError("tail_fraction must lie in (0, 1)");
    for (double a : a_values)
        if (!(a > 0.0)) throw ConfigError("bifurcation a values must be positive");
    auto task = [&](std::size_t idx) {
        const double a = a_values[idx];
        return detail::with_context("hopf a=" + std::to_string(a), [&] {
            const PresetId id{"hopf", {{"a", a}}};
            const GridFunction p0 = GridFunction::sample(mesh, initial_condition(id));
            const Trajectory traj = solve(Scheme::SOEM, make_preset(id), p0, mesh, options.solve_options(mesh.n_steps()));
            return tail_statistics(a, traj.q_series, tail_fraction);
        });
    };
    return detail::ordered_map<BifurcationPoint>(a_values.size(), task, options.parallel);
}

// ---------------------------------------------------------------------------
// Roots of the characteristic equation.

struct CharRoot {
    Complex lambda;
    double residual = 0.0; // |K(lambda) - 1|
};

inline std::vector<CharRoot> run_charroots(const CharacteristicProblem& prob, const std::vector<Complex>& guesses) {
    std::vector<CharRoot> out;
    for (const Complex& g : guesses) {
        const Complex root = find_root(g, prob);
        const Complex k = prob.eps > 0.0 ? k_eps(root, prob) : k_limit(root, prob);
        out.push_back({root, std::abs(k - 1.0)});
    }
    return out;
}

} // namespace sspop
