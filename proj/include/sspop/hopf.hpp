#pragma once

#include "sspop/error.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace sspop {

using Complex = std::complex<double>;

/// Linearisation of the boundary-recruitment model at its positive steady state:
/// fertility supported on [q, q + eps], survival up to s_c, ln_r = ln R~.
struct CharacteristicProblem {
    double q = 1.0 / 6.0;
    double s_c = 0.5;
    double ln_r = 1.5 * std::numbers::pi;
    double eps = 0.0; // 0 selects the limiting equation

    void validate() const {
        if (!(q > 0.0 && q < s_c && s_c < 1.0)) throw DomainError("characteristic problem needs 0 < q < s_c < 1");
        if (!(ln_r > 0.0)) throw DomainError("characteristic problem needs ln_r > 0 (no positive steady state)");
        if (!(eps >= 0.0) || q + eps > 1.0) throw DomainError("characteristic problem needs eps >= 0, q + eps <= 1");
    }

    friend bool operator==(const CharacteristicProblem&, const CharacteristicProblem&) = default;
};

struct SteadyState {
    double q_star = 0.0;
    double p0_star = 0.0;
    double s_c = 0.0;

    /// p*(0) below the survival cutoff, 0 above it.
    double profile(double s) const noexcept { return s < s_c ? p0_star : 0.0; }
};

inline SteadyState steady_state(const CharacteristicProblem& prob) {
    prob.validate();
    return {prob.ln_r, prob.ln_r / prob.s_c, prob.s_c};
}

namespace detail {

inline constexpr double kSeriesRadius = 1e-4;

// (1 - e^{-z}) / z
inline Complex phi(Complex z) {
    if (std::abs(z) < kSeriesRadius) return 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
    return (1.0 - std::exp(-z)) / z;
}

// d/dz (1 - e^{-z}) / z = (e^{-z} (1 + z) - 1) / z^2
inline Complex phi_prime(Complex z) {
    if (std::abs(z) < kSeriesRadius) return -0.5 + z / 3.0 - z * z / 8.0 + z * z * z / 30.0;
    return (std::exp(-z) * (1.0 + z) - 1.0) / (z * z);
}

// K(l) - 1 and K'(l) for the problem's equation.
inline std::pair<Complex, Complex> residual_and_derivative(Complex lambda, const CharacteristicProblem& p) {
    const double a = p.ln_r / p.s_c;
    const Complex shift = std::exp(-lambda * p.q);
    Complex k = -a * p.s_c * phi(lambda * p.s_c);
    Complex dk = -a * p.s_c * p.s_c * phi_prime(lambda * p.s_c);
    if (p.eps > 0.0) {
        const Complex w = phi(lambda * p.eps);
        k += shift * w;
        dk += -p.q * shift * w + shift * p.eps * phi_prime(lambda * p.eps);
    } else {
        k += shift;
        dk += -p.q * shift;
    }
    return {k - 1.0, dk};
}

} // namespace detail

/// K(l) = e^{-l q} - (ln_r / s_c) (1 - e^{-l s_c}) / l, continuous at l = 0.
inline Complex k_limit(Complex lambda, const CharacteristicProblem& prob) {
    const double a = prob.ln_r / prob.s_c;
    return std::exp(-lambda * prob.q) - a * prob.s_c * detail::phi(lambda * prob.s_c);
}

/// K with fertility spread uniformly over [q, q + eps].
inline Complex k_eps(Complex lambda, const CharacteristicProblem& prob) {
    if (!(prob.eps > 0.0)) throw DomainError("k_eps needs eps > 0");
    const double a = prob.ln_r / prob.s_c;
    return std::exp(-lambda * prob.q) * detail::phi(lambda * prob.eps) - a * prob.s_c * detail::phi(lambda * prob.s_c);
}

/// Real and imaginary parts of K(i alpha) - 1 for the limiting equation.
inline std::pair<double, double> imag_axis_residual(double alpha, const CharacteristicProblem& prob) {
    if (alpha == 0.0) throw DomainError("imaginary-axis residual needs alpha != 0");
    const double g = prob.ln_r / (alpha * prob.s_c);
    return {std::cos(alpha * prob.q) - g * std::sin(alpha * prob.s_c) - 1.0,
            -std::sin(alpha * prob.q) - g * (std::cos(alpha * prob.s_c) - 1.0)};
}

struct NewtonOptions {
    double tolerance = 1e-12;  // on |K(l) - 1|
    double acceptable = 1e-10; // accepted when rounding stalls the iteration above tolerance
    std::size_t max_iterations = 100;
    std::size_t max_halvings = 20;
};

/// Damped Newton iteration on K(l) = 1 using the analytic derivative.
inline Complex find_root(Complex initial, const CharacteristicProblem& prob, const NewtonOptions& opt = {}) {
    prob.validate();
    std::vector<Complex> trace{initial};
    Complex lambda = initial;
    auto [r, dk] = detail::residual_and_derivative(lambda, prob);
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
        if (!std::isfinite(std::abs(r))) break;
        if (std::abs(r) < opt.tolerance) return lambda;
        if (dk == 0.0) throw NoConvergenceError("derivative vanishes at iterate " + std::to_string(it), trace);
        Complex step = r / dk;
        bool accepted = false;
        for (std::size_t h = 0; h <= opt.max_halvings; ++h) {
            const Complex trial = lambda - step;
            const auto [tr, tdk] = detail::residual_and_derivative(trial, prob);
            if (std::isfinite(std::abs(tr)) && std::abs(tr) < std::abs(r)) {
                lambda = trial;
                r = tr;
                dk = tdk;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        trace.push_back(lambda);
        if (!accepted && std::abs(r) < opt.acceptable) return lambda;
        if (!accepted) throw NoConvergenceError("no damped step reduces the residual", trace);
    }
    if (std::abs(r) < opt.acceptable) return lambda;
    throw NoConvergenceError("Newton iteration did not converge, |K - 1| = " + std::to_string(std::abs(r)), trace);
}

} // namespace sspop
