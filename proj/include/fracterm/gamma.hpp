#pragma once

#include <cmath>
#include <limits>

#include "fracterm/errors.hpp"

namespace fracterm {

inline constexpr double pi = 3.14159265358979323846;

/// log|Gamma(x)| for x > 0.
inline double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
    return std::lgamma(x);
}

/// True when x sits on a pole of Gamma (non-positive integer, up to rounding slop).
inline bool is_gamma_pole(double x) {
    if (x > 0.0) return false;
    double r = std::round(x);
    return std::abs(x - r) < 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
}

/// 1/Gamma(x) for any real x; zero at the poles.
/// Negative arguments go through the reflection formula
/// 1/Gamma(x) = Gamma(1-x) sin(pi x)/pi.
inline double reciprocal_gamma(double x) {
    if (x > 0.0) {
        if (x > 171.0) return std::exp(-std::lgamma(x));
        return 1.0 / std::tgamma(x);
    }
    if (is_gamma_pole(x)) return 0.0;
    // sin(pi x) via the reduced argument to keep accuracy for large |x|
    double r = x - std::round(x);
    double sin_pix = std::sin(pi * r) * (static_cast<long long>(std::llround(std::round(x))) % 2 == 0 ? 1.0 : -1.0);
    double lg = std::lgamma(1.0 - x);
    if (lg > 700.0) {
        // Gamma(1-x) overflows; fold everything through logs
        double mag = std::exp(lg + std::log(std::abs(sin_pix)) - std::log(pi));
        return std::copysign(mag, sin_pix);
    }
    return std::exp(lg) * sin_pix / pi;
}

/// Gamma(x) for x not at a pole; +-inf is never produced for |x| <= 170.
inline double gamma_fn(double x) {
    if (x > 0.0) return std::tgamma(x);
    if (is_gamma_pole(x)) throw DomainError("gamma_fn: argument at a pole");
    double rg = reciprocal_gamma(x);
    return 1.0 / rg;
}

}  // namespace fracterm
