#pragma once

#include "sspop/coefficients.hpp"
#include "sspop/error.hpp"
#include "sspop/special_functions.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <string>
#include <vector>

namespace sspop {

/// A named coefficient preset with numeric parameters.
struct PresetId {
    std::string name;
    std::map<std::string, double> params;

    friend bool operator==(const PresetId&, const PresetId&) = default;
};

namespace presets {

inline constexpr double kDefaultValidationQMax = 2.0;
inline constexpr double kDefaultHopfQMax = 10.0;

inline double half_taper(double s, double) { return 0.5 * (1.0 - s); }

inline double hopf_mortality(double s) {
    return 160.0 / ((250000.0 * s * s - 250000.0 * s + 62505.0) * (0.32 * std::atan(250.0 - 500.0 * s) + 2.0));
}

inline double hopf_offspring_shape(double s) { return 10.0 * std::atan(5.0 - 1000.0 * s) + 15.7; }

inline double hopf_fertility_shape(double y) {
    const double z = 100.0 * (y - 1.0 / 6.0 + 0.005);
    return std::exp(-0.5 * z * z) * std::exp(1.5 * std::numbers::pi) / std::sqrt(2.0 * std::numbers::pi);
}

/// Exact solution of the validation problem.
inline double validation_exact(double s, double t) { return s * std::exp(t); }

inline CoefficientSet validation(double q_max) {
    CoefficientSet c;
    c.name = "validation";
    c.growth = half_taper;
    c.mortality = [](double, double q) { return 2.0 * q; };
    // 1 + 4 s Q split into two separable terms.
    c.recruitment = std::make_shared<const SeparableKernel>(std::vector<SeparableKernel::Term>{
        {[](double) { return 1.0; }, [](double, double) { return 1.0; }},
        {[](double s) { return 4.0 * s; }, [](double, double q) { return q; }},
    });
    c.bound_c = std::max(4.0, 1.0 + 4.0 * q_max);
    c.q_range = q_max;
    c.gamma_vanishes_at_right = true;
    return c;
}

inline CoefficientSet discontinuity(double m, double q_max) {
    CoefficientSet c;
    c.name = "discontinuity";
    c.growth = half_taper;
    c.mortality = [](double, double q) { return 2.0 * std::exp(0.1 * q); };
    c.recruitment = std::make_shared<const BoxKernel>(m);
    // The box has height m and s-variation 2m; mortality is bounded by its value at q_max.
    c.bound_c = std::max(2.0 * m, 2.0 * std::exp(0.1 * q_max));
    c.q_range = q_max;
    c.gamma_vanishes_at_right = true;
    return c;
}

inline CoefficientSet weakstar_dssm(double a, double b) {
    if (!(a > 1.0) || !(b > 1.0)) throw ConfigError("weakstar_dssm needs a > 1 and b > 1");
    CoefficientSet c;
    c.name = "weakstar_dssm";
    c.growth = half_taper;
    c.mortality = [](double, double) { return 1.0; };
    c.recruitment = std::make_shared<const SeparableKernel>(std::vector<SeparableKernel::Term>{
        {[a, b](double s) { return beta_pdf(s, a, b); }, [](double, double) { return 1.0; }},
    });
    // Unimodal density vanishing at both ends: variation in s is twice the peak.
    const double mode = (a - 1.0) / (a + b - 2.0);
    c.bound_c = std::max(1.0, 2.0 * beta_pdf(mode, a, b));
    c.q_range = 1.0;
    c.gamma_vanishes_at_right = true;
    return c;
}

inline CoefficientSet weakstar_cssm() {
    CoefficientSet c;
    c.name = "weakstar_cssm";
    c.growth = half_taper;
    c.mortality = [](double, double) { return 1.0; };
    c.recruitment = BoundaryFertility{[](double, double) { return 1.0; }};
    c.bound_c = 1.0;
    c.q_range = 1.0;
    c.gamma_vanishes_at_right = true;
    return c;
}

/// No declared constant; growth is 1 everywhere, so mass leaves through s = 1.
inline CoefficientSet hopf(double a, double q_max) {
    if (!(a > 0.0)) throw ConfigError("hopf needs a > 0");
    CoefficientSet c;
    c.name = "hopf";
    c.growth = [](double, double) { return 1.0; };
    c.mortality = [](double s, double) { return hopf_mortality(s); };
    c.recruitment = std::make_shared<const SeparableKernel>(std::vector<SeparableKernel::Term>{
        {hopf_offspring_shape, [a](double y, double q) { return a * std::exp(-q) * hopf_fertility_shape(y); }},
    });
    c.q_range = q_max;
    return c;
}

} // namespace presets

namespace detail {

inline double param(const PresetId& id, const std::string& key) {
    auto it = id.params.find(key);
    if (it == id.params.end()) throw ConfigError("preset '" + id.name + "' needs parameter '" + key + "'");
    return it->second;
}

inline double param_or(const PresetId& id, const std::string& key, double fallback) {
    auto it = id.params.find(key);
    return it == id.params.end() ? fallback : it->second;
}

inline void require_params(const PresetId& id, std::set<std::string> allowed) {
    for (const auto& [key, value] : id.params) {
        if (!allowed.contains(key)) throw ConfigError("preset '" + id.name + "' has no parameter '" + key + "'");
        if (!std::isfinite(value)) throw ConfigError("preset parameter '" + key + "' is not finite");
    }
}

} // namespace detail

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"validation", "discontinuity", "weakstar_dssm", "weakstar_cssm",
                                                "hopf"};
    return names;
}

inline CoefficientSet make_preset(const PresetId& id) {
    if (id.name == "validation") {
        detail::require_params(id, {"q_max"});
        const double q_max = detail::param_or(id, "q_max", presets::kDefaultValidationQMax);
        if (!(q_max > 0.0)) throw ConfigError("validation q_max must be positive");
        return presets::validation(q_max);
    }
    if (id.name == "discontinuity") {
        detail::require_params(id, {"m", "q_max"});
        const double m = detail::param(id, "m");
        const double q_max = detail::param_or(id, "q_max", presets::kDefaultValidationQMax);
        if (!(m > 0.0)) throw ConfigError("discontinuity m must be positive");
        if (!(q_max > 0.0)) throw ConfigError("discontinuity q_max must be positive");
        return presets::discontinuity(m, q_max);
    }
    if (id.name == "weakstar_dssm") {
        detail::require_params(id, {"a", "b"});
        return presets::weakstar_dssm(detail::param(id, "a"), detail::param(id, "b"));
    }
    if (id.name == "weakstar_cssm") {
        detail::require_params(id, {});
        return presets::weakstar_cssm();
    }
    if (id.name == "hopf") {
        detail::require_params(id, {"a", "q_max"});
        const double q_max = detail::param_or(id, "q_max", presets::kDefaultHopfQMax);
        if (!(q_max > 0.0)) throw ConfigError("hopf q_max must be positive");
        return presets::hopf(detail::param(id, "a"), q_max);
    }
    throw ConfigError("unknown preset '" + id.name + "'");
}

/// The initial density each preset is run from.
inline std::function<double(double)> initial_condition(const PresetId& id) {
    if (id.name == "validation" || id.name == "hopf") return [](double s) { return s; };
    if (id.name == "discontinuity")
        return [](double s) { return (s >= 0.25 && s <= 0.75) ? 1.0 : 0.5; };
    if (id.name == "weakstar_dssm" || id.name == "weakstar_cssm") return [](double s) { return s * s * s; };
    throw ConfigError("unknown preset '" + id.name + "'");
}

} // namespace sspop
