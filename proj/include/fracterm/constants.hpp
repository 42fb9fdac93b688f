#pragma once

#include <algorithm>
#include <cmath>

#include "fracterm/errors.hpp"
#include "fracterm/gamma.hpp"

namespace fracterm {

/// Everything the constants list depends on: regularity parameters,
/// horizon, first eigenvalue, fitted kernel envelope (m_alpha, M_alpha),
/// fitted embedding constants, and the source norms.
struct ConstantsInput {
    double alpha = 1.5;
    double theta = 0.8;
    double nu = 0.0;
    double sigma = -0.8;       // mu = nu - sigma
    double q = 1.0;
    double vartheta = 0.9;
    double zeta = -1.2;
    double s = 1.0;
    double t_final = 2.0;
    double lambda1 = 1.0;
    double m_alpha = 1.0;      // lower kernel envelope
    double big_m_alpha = 1.0;  // upper kernel envelope
    double c1 = 1.0;           // embedding constant C1(nu, theta)
    double c2 = 1.0;           // embedding constant C2(nu, sigma)
    double l1_norm = 0.0;
    double l2_norm = 0.0;
    double k0 = 0.0;
    double f_norm = 1.0;       // terminal data in the critical-space norm
    double nu_prime = 0.0;     // global Holder exponent input
    double eta = 0.0;          // critical Holder exponent input
};

struct ConstantsBundle {
    ConstantsInput in;
    double m1 = 0.0;       // M1
    double m2 = 0.0;       // M2
    double ms1 = 0.0;      // script M1
    double mbar1 = 0.0;
    double mbar2 = 0.0;
    double mbar3 = 0.0;
    double ms2 = 0.0;      // script M2
    double n1 = 0.0;       // N1
    double n2 = 0.0;       // N2
    double ns1 = 0.0;      // script N1
    double ns2 = 0.0;      // script N2
    double ns2_bar = 0.0;  // script N2 overline
    double n_f = 0.0;
    double r_hat = 0.0;
    double eta_glo = 0.0;
    double eta_cri = 0.0;
    // admissibility predicates of the three solvability theorems
    bool picard_ok = false;    // ||L1|| < 1 / script M1
    bool l2_ok = false;        // L2 < 1 / script M2
    bool critical_ok = false;  // K0 T^{s alpha vartheta} < min{1/(2 script N2 bar), N_f}
};

namespace detail {

inline double beta_fn(double a, double b) {
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// min{x, alpha-1} on (0,1], min{x-1, alpha-1} on (1,2), else 0
inline double eta_piecewise(double x, double alpha) {
    if (x > 0.0 && x <= 1.0) return std::min(x, alpha - 1.0);
    if (x > 1.0 && x < 2.0) return std::min(x - 1.0, alpha - 1.0);
    return 0.0;
}

}  // namespace detail

inline ConstantsBundle compute_constants(const ConstantsInput& in) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw DomainError(std::string("compute_constants: ") + what);
    };
    const double a = in.alpha, th = in.theta, T = in.t_final, l1 = in.lambda1;
    const double m = in.m_alpha, M = in.big_m_alpha;
    const double vt = in.vartheta, mu = in.nu - in.sigma;
    require(a > 1.0 && a <= 2.0, "alpha in (1,2]");
    require(th > (a - 1.0) / a && th < 1.0, "(alpha-1)/alpha < theta < 1");
    require(T > 0.0, "T > 0");
    require(l1 > 0.0, "lambda1 > 0");
    require(m > 0.0 && M > 0.0, "kernel envelope constants positive");
    require(in.q >= 1.0, "q >= 1");
    require(1.0 - a * (1.0 - th) * in.q > 0.0, "1 - alpha(1-theta) q > 0");
    require(in.s > 0.0, "s > 0");
    require(vt > mu && vt < 1.0, "vartheta in (nu - sigma, 1)");
    require(in.zeta < 1.0 / a - (1.0 + in.s) * vt, "zeta < 1/alpha - (1+s) vartheta");
    require(in.f_norm >= 0.0 && in.l1_norm >= 0.0 && in.l2_norm >= 0.0 && in.k0 >= 0.0,
            "norms non-negative");

    ConstantsBundle c;
    c.in = in;
    c.m1 = M * M / m * std::pow(T, a * (1.0 - th)) *
           (std::pow(T, a * th) + std::pow(l1, -th));
    c.m2 = M * M / m * std::pow(T, a * (1.0 - th)) / (a * a * th * (1.0 - th)) *
           (std::pow(T, a) + 1.0 / l1);
    c.ms1 = (pi * M * std::pow(l1, -th) * std::pow(T, a * (1.0 - th)) + pi * c.m1) /
            std::sin(pi * a * (1.0 - th));
    c.mbar1 = in.c2 * M * std::pow(T, a + 1.0 / in.q) /
              (a * std::pow(a * in.q + 1.0, 1.0 / in.q));
    c.mbar2 = std::pow(T, a * (1.0 - th)) *
              (std::pow(T, a * th + 1.0 / in.q) + std::pow(l1, -th)) /
              (std::pow(1.0 - a * (1.0 - th) * in.q, 1.0 / in.q) * a * (1.0 - th));
    c.mbar3 = M * std::pow(T, a) / a * (1.0 + M / m * (std::pow(T, a) + 1.0 / l1));
    c.ms2 = in.l2_norm * (c.mbar1 + c.mbar2 + c.mbar3);
    c.n1 = c.m1 / M * in.c1 / (1.0 - in.l1_norm * c.ms1);
    c.n2 = M / m * std::pow(T, a * vt) *
           (std::pow(T, a * (1.0 - vt)) + std::pow(l1, vt - 1.0));
    const double z1 = vt - mu, z2 = 1.0 - mu;
    const double second = 1.0 - a * (1.0 + in.s) * vt - a * in.zeta;
    c.ns1 = std::max(detail::beta_fn(a * z1, second), detail::beta_fn(a * z2, second));
    c.ns2 = M * c.ns1 *
            std::max(std::pow(T, a * (z1 - in.s * vt - in.zeta)),
                     std::pow(T, a * (z2 - in.s * vt - in.zeta)));
    c.ns2_bar = c.ns2 * (1.0 + c.n2 * std::pow(T, -a * vt));
    c.n_f = std::pow(in.s / (c.n2 * in.f_norm), in.s) /
            std::pow(2.0 + 2.0 * in.s, 1.0 + in.s);
    c.r_hat = std::pow((1.0 - c.ns2_bar * in.k0 * std::pow(T, in.s * a * vt)) /
                           ((1.0 + in.s) * c.ns2_bar * in.k0),
                       1.0 / in.s);
    c.eta_glo = detail::eta_piecewise(a * (th + in.nu_prime - 1.0), a);
    c.eta_cri = detail::eta_piecewise(a * (in.eta - vt), a);

    c.picard_ok = in.l1_norm * c.ms1 < 1.0;
    c.l2_ok = in.l2_norm == 0.0 || c.ms2 < 1.0;
    c.critical_ok =
        in.k0 * std::pow(T, in.s * a * vt) < std::min(0.5 / c.ns2_bar, c.n_f);
    return c;
}

}  // namespace fracterm
