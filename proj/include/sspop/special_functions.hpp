#pragma once

#include "sspop/error.hpp"

#include <cmath>
#include <limits>

namespace sspop {

/// ln B(a, b) through the standard library's log-gamma.
inline double log_beta_function(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta function needs positive parameters");
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

/// Density s^{a-1} (1-s)^{b-1} / B(a, b) on [0, 1].
inline double beta_pdf(double s, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta density needs positive parameters");
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("beta density evaluated outside [0, 1]");
    // (a-1) ln s with a == 1 must stay 0 at s == 0, not 0 * -inf.
    const double left = a == 1.0 ? 0.0 : (a - 1.0) * std::log(s);
    const double right = b == 1.0 ? 0.0 : (b - 1.0) * std::log1p(-s);
    return std::exp(left + right - log_beta_function(a, b));
}

} // namespace sspop
