#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "fracterm/errors.hpp"
#include "fracterm/gamma.hpp"

namespace fracterm {

struct MLParams {
    double alpha;
    double beta;
};

inline void validate(const MLParams& p) {
    if (!(p.alpha > 0.0) || !(p.alpha <= 2.0) || !std::isfinite(p.alpha))
        throw DomainError("MLParams: alpha must lie in (0,2]");
    if (!(p.beta > 0.0) || !std::isfinite(p.beta))
        throw DomainError("MLParams: beta must be positive and finite");
}

/// Value with a certified absolute error bound.
struct MLValue {
    double value;
    double error_bound;
};

namespace detail {

using mp50 = boost::multiprecision::cpp_bin_float_50;

inline constexpr double kNoValue = std::numeric_limits<double>::quiet_NaN();

struct Candidate {
    double value = kNoValue;
    double bound = std::numeric_limits<double>::infinity();
    bool ok = false;
};

/// Closed forms for the (alpha,beta) pairs with elementary expressions.
inline Candidate ml_closed_form(const MLParams& p, double z) {
    Candidate c;
    double t = -z;
    if (p.alpha == 1.0 && p.beta == 1.0) {
        c.value = std::exp(z);
        c.bound = 4e-16 * std::abs(c.value);
        c.ok = true;
    } else if (p.alpha == 1.0 && p.beta == 2.0) {
        c.value = (z == 0.0) ? 1.0 : std::expm1(z) / z;
        c.bound = 4e-16 * std::abs(c.value) + 1e-18;
        c.ok = true;
    } else if (p.alpha == 2.0 && p.beta == 1.0) {
        double w = std::sqrt(t);
        c.value = std::cos(w);
        c.bound = 4e-16 * (1.0 + 1e-16 * w * w);
        c.ok = true;
    } else if (p.alpha == 2.0 && p.beta == 2.0) {
        double w = std::sqrt(t);
        c.value = (w == 0.0) ? 1.0 : std::sin(w) / w;
        c.bound = 4e-16 * (1.0 + 1e-16 * w * w) / std::max(w, 1.0);
        c.ok = true;
    }
    return c;
}

/// Taylor series in extended precision with Kahan compensation.
/// Only worthwhile while cancellation stays below the long-double mantissa.
inline Candidate ml_series_ld(const MLParams& p, double z) {
    Candidate c;
    const long double zl = z;
    long double sum = 0.0L, comp = 0.0L, sum_abs = 0.0L;
    long double power_log = 0.0L;  // k * log|z|
    const long double log_abs_z = (z == 0.0) ? 0.0L : std::log(std::abs((long double)z));
    int decreasing = 0;
    int n = 0;
    long double last_mag = 0.0L;
    for (int k = 0; k <= 400; ++k) {
        long double term;
        if (k == 0) {
            term = 1.0L / std::tgammal((long double)p.beta);
        } else {
            power_log = k * log_abs_z;
            long double lg = std::lgammal((long double)p.alpha * k + (long double)p.beta);
            long double mag = std::exp(power_log - lg);
            term = (zl < 0.0L && (k & 1)) ? -mag : mag;
        }
        long double y = term - comp;
        long double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        sum_abs += std::abs(term);
        last_mag = std::abs(term);
        ++n;
        if (k > 0 && std::abs(term) <= 1e-20L * std::max(sum_abs, 1e-300L)) {
            if (++decreasing >= 3) break;
        } else {
            decreasing = 0;
        }
    }
    c.value = static_cast<double>(sum);
    // term construction error (exp/lgamma in long double), summation error,
    // and a truncation term in case the 400-term cap was hit
    c.bound = static_cast<double>(sum_abs) * (4e-17 + n * 1.1e-19) +
              3.0 * static_cast<double>(last_mag) + 1e-300;
    c.ok = true;
    return c;
}

/// Asymptotic expansion at z -> -inf: algebraic series truncated at its
/// smallest term, plus the exact conjugate-pair residue contribution
/// (oscillatory, exponentially damped) present for 1 <= alpha <= 2.
inline Candidate ml_asymptotic(const MLParams& p, double z) {
    Candidate c;
    const double t = -z;
    if (!(t > 1.0)) return c;
    const double log_t = std::log(t);
    double sum = 0.0, comp = 0.0, abs_sum = 0.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    double err_alg = 0.0;
    bool truncated = false;
    double last_mag = 0.0;
    for (int k = 1; k <= 80; ++k) {
        double arg = p.beta - p.alpha * k;
        if (is_gamma_pole(arg)) continue;
        // a_k = (-1)^{k+1} t^{-k} / Gamma(beta - alpha k), in log space
        double r = arg - std::round(arg);
        double sin_pi = std::sin(pi * r) * (static_cast<long long>(std::llround(std::round(arg))) % 2 == 0 ? 1.0 : -1.0);
        double log_mag = -k * log_t + std::lgamma(1.0 - arg) + std::log(std::abs(sin_pi)) - std::log(pi);
        double mag = (log_mag < -744.0) ? 0.0 : std::exp(log_mag);
        if (mag >= prev_mag) {
            err_alg = mag;
            truncated = true;
            break;
        }
        double term = ((k & 1) ? 1.0 : -1.0) * std::copysign(mag, sin_pi);
        double y = term - comp;
        double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        abs_sum += mag;
        prev_mag = mag;
        last_mag = mag;
        if (mag == 0.0) break;
    }
    if (!truncated) err_alg = last_mag;

    double osc = 0.0, err_osc = 0.0;
    if (p.alpha >= 1.0) {
        double w = std::pow(t, 1.0 / p.alpha);
        double cc = std::cos(pi / p.alpha);
        double ss = std::sin(pi / p.alpha);
        double expo = w * cc;
        if (expo > -745.0) {
            double factor = (p.alpha == 1.0) ? 1.0 : 2.0 / p.alpha;
            double amp = factor * std::pow(t, (1.0 - p.beta) / p.alpha) * std::exp(expo);
            double phase = pi * (1.0 - p.beta) / p.alpha + w * ss;
            osc = amp * std::cos(phase);
            err_osc = std::abs(amp) * ((std::abs(phase) + std::abs(expo) + 4.0) * 1.2e-16);
        }
    }
    c.value = sum + osc;
    c.bound = err_alg + err_osc + 2e-16 * (abs_sum + std::abs(osc));
    c.ok = true;
    return c;
}

/// Cached 1/Gamma(alpha k + beta) coefficients at 50 decimal digits.
struct MPCoefficients {
    MLParams params;
    std::vector<mp50> inv_gamma;
    void extend(std::size_t k_max) {
        std::size_t old = inv_gamma.size();
        if (k_max < old) return;
        inv_gamma.resize(k_max + 1);
        for (std::size_t k = old; k <= k_max; ++k) {
            mp50 arg = mp50(params.alpha) * static_cast<unsigned>(k) + mp50(params.beta);
            inv_gamma[k] = exp(-boost::math::lgamma(arg));
        }
    }
};

/// Taylor series in 50-digit floats; rescues the cancellation band where
/// neither double-precision branch certifies. Usable while the largest
/// term stays below ~1e30.
inline Candidate ml_series_mp(MPCoefficients& coeffs, double z) {
    Candidate c;
    const MLParams& p = coeffs.params;
    const double t = std::abs(z);
    // a priori cancellation estimate: max term ~ exp(t^{1/alpha})
    double peak_log10 = std::pow(t, 1.0 / p.alpha) * 0.4342944819032518;
    if (peak_log10 > 30.0) return c;
    const std::size_t k_guess = static_cast<std::size_t>(3.0 * std::pow(t, 1.0 / p.alpha) + 40.0);
    coeffs.extend(k_guess);
    mp50 sum = 0, sum_abs = 0, power = 1;
    const mp50 zmp = z;
    std::size_t k = 0;
    for (;;) {
        if (k >= coeffs.inv_gamma.size()) coeffs.extend(k + 64);
        mp50 term = power * coeffs.inv_gamma[k];
        sum += term;
        sum_abs += abs(term);
        if (k > k_guess && abs(term) < sum_abs * mp50(1e-45)) break;
        if (k > 4000) break;
        power *= zmp;
        ++k;
    }
    c.value = static_cast<double>(sum);
    c.bound = static_cast<double>(sum_abs) * 1e-44 + std::abs(c.value) * 2.3e-16 + 1e-300;
    c.ok = true;
    return c;
}

inline double envelope_scale(double value, double z) {
    return std::max(std::abs(value), 1.0 / (1.0 + std::abs(z)));
}

}  // namespace detail

/// Evaluator for E_{alpha,beta}(z), z <= 0, with certified error bounds.
/// Owns a growing multiprecision coefficient cache; a single instance is
/// not safe for concurrent use (the free function ml() is).
class MLEvaluator {
  public:
    explicit MLEvaluator(MLParams p) : params_(p) {
        validate(p);
        coeffs_.params = p;
    }

    const MLParams& params() const { return params_; }

    MLValue evaluate(double z) const {
        if (!(z <= 0.0) || !std::isfinite(z))
            throw DomainError("ml: argument must be finite and <= 0");
        if (z == 0.0) {
            double v = reciprocal_gamma(params_.beta);
            return {v, 4e-16 * std::abs(v)};
        }
        detail::Candidate best = detail::ml_closed_form(params_, z);
        if (best.ok) return {best.value, best.bound};

        const double t = -z;
        if (t <= 200.0) {
            detail::Candidate s = detail::ml_series_ld(params_, z);
            if (s.ok && s.bound < best.bound) best = s;
        }
        detail::Candidate a = detail::ml_asymptotic(params_, z);
        if (a.ok && a.bound < best.bound) best = a;

        double target = 1e-13 * detail::envelope_scale(best.ok ? best.value : 0.0, z);
        if (!best.ok || best.bound > target) {
            detail::Candidate m = detail::ml_series_mp(coeffs_, z);
            if (m.ok && m.bound < best.bound) best = m;
        }
        return {best.value, best.bound};
    }

  private:
    MLParams params_;
    mutable detail::MPCoefficients coeffs_;
};

/// E_{alpha,beta}(z) for real z <= 0.
/// Throws AccuracyError when no branch certifies `tol` relative to the
/// natural scale max(|E|, 1/(1+|z|)).
inline double ml(const MLParams& params, double z, double tol = 1e-12) {
    MLEvaluator ev(params);
    MLValue v = ev.evaluate(z);
    if (v.error_bound > tol * detail::envelope_scale(v.value, z))
        throw AccuracyError("ml: requested tolerance not certified", v.value, v.error_bound);
    return v.value;
}

/// Per-mode kernel of the source-response operator: t^{alpha-1} E_{alpha,alpha}(-lambda t^alpha).
inline double ml_kernel(double alpha, double lambda, double t) {
    if (!(t > 0.0)) throw DomainError("ml_kernel: t must be positive");
    if (!(lambda > 0.0)) throw DomainError("ml_kernel: lambda must be positive");
    MLEvaluator ev(MLParams{alpha, alpha});
    return std::pow(t, alpha - 1.0) * ev.evaluate(-lambda * std::pow(t, alpha)).value;
}

/// Central-difference residuals of the two differentiation identities:
///   d/dt E_{alpha,1}(-lambda t^alpha)              = -lambda t^{alpha-1} E_{alpha,alpha}(-lambda t^alpha)
///   d/dt [t^{alpha-1} E_{alpha,alpha}(-lambda t^alpha)] = t^{alpha-2} E_{alpha,alpha-1}(-lambda t^alpha)
struct MLDerivativeResiduals {
    double residual_a1;
    double residual_a2;
};

inline MLDerivativeResiduals ml_derivative_identity_residual(double alpha, double lambda,
                                                             double t, double h) {
    if (!(h > 0.0) || !(t > 2.0 * h))
        throw DomainError("ml_derivative_identity_residual: need t > 2h > 0");
    MLEvaluator e1(MLParams{alpha, 1.0});
    MLEvaluator em1(MLParams{alpha, alpha - 1.0});

    auto E1 = [&](double s) { return e1.evaluate(-lambda * std::pow(s, alpha)).value; };
    double fd1 = (E1(t + h) - E1(t - h)) / (2.0 * h);
    double closed1 = -lambda * ml_kernel(alpha, lambda, t);
    double r1 = std::abs(fd1 - closed1) / std::max(1.0, std::abs(closed1));

    double fd2 = (ml_kernel(alpha, lambda, t + h) - ml_kernel(alpha, lambda, t - h)) / (2.0 * h);
    double closed2 = std::pow(t, alpha - 2.0) * em1.evaluate(-lambda * std::pow(t, alpha)).value;
    double r2 = std::abs(fd2 - closed2) / std::max(1.0, std::abs(closed2));
    return {r1, r2};
}

/// Empirical envelope constants of |E_{alpha,beta}(-t)| ~ 1/(1+t).
struct MLBoundConstants {
    double m_alpha;
    double M_alpha;
    double scan_lo;
    double scan_hi;
    bool lower_bound_violated;
};

/// Scans (1+t)|E_{alpha,beta}(-t)| on a log grid over (0, t_max].
/// A sign change of E along the grid marks a zero crossing; the lower
/// bound of the lemma fails pointwise there and the flag is raised.
inline MLBoundConstants fit_bound_constants(double alpha, double beta, double t_max,
                                            int n_points = 400) {
    if (!(t_max > 0.0)) throw DomainError("fit_bound_constants: t_max must be positive");
    if (n_points < 100) throw DomainError("fit_bound_constants: need n_points >= 100");
    MLEvaluator ev(MLParams{alpha, beta});
    const double t_lo = std::min(1e-8, t_max * 1e-6);
    double m = std::numeric_limits<double>::infinity();
    double M = 0.0;
    bool violated = false;
    double prev_sign = 0.0;
    for (int i = 0; i <= n_points; ++i) {
        double t = t_lo * std::pow(t_max / t_lo, static_cast<double>(i) / n_points);
        double e = ev.evaluate(-t).value;
        double g = (1.0 + t) * std::abs(e);
        m = std::min(m, g);
        M = std::max(M, g);
        double s = (e > 0.0) ? 1.0 : (e < 0.0 ? -1.0 : 0.0);
        if (i > 0 && s * prev_sign < 0.0) violated = true;
        if (s == 0.0) violated = true;
        prev_sign = s;
    }
    return {m, M, t_lo, t_max, violated};
}

/// Piecewise-Chebyshev table of y -> E_{alpha,beta}(-y) on [y_lo, y_hi]
/// in log-y, certified against the direct evaluator during construction.
/// Outside the range it falls back to the cheap direct branches (series
/// below, asymptotic above), which certify there by construction.
class MLTable {
  public:
    explicit MLTable(MLParams p, double y_lo = 0.25, double y_hi = 4000.0, double tol = 1e-12)
        : params_(p), y_lo_(y_lo), y_hi_(y_hi), eval_(p) {
        validate(p);
        closed_form_ = (p.alpha == 1.0 || p.alpha == 2.0) && (p.beta == 1.0 || p.beta == 2.0);
        if (closed_form_) return;
        build(std::log(y_lo_), std::log(y_hi_), tol, 0);
    }

    const MLParams& params() const { return params_; }
    double max_certified_error() const { return worst_error_; }

    /// E_{alpha,beta}(-y), y >= 0.
    double operator()(double y) const {
        if (!(y >= 0.0)) throw DomainError("MLTable: argument must be >= 0");
        if (closed_form_) return detail::ml_closed_form(params_, -y).value;
        if (y == 0.0) return reciprocal_gamma(params_.beta);
        if (y < y_lo_) return detail::ml_series_ld(params_, -y).value;
        if (y > y_hi_) return detail::ml_asymptotic(params_, -y).value;
        double x = std::log(y);
        const Panel& pan = find_panel(x);
        return clenshaw(pan, x);
    }

  private:
    static constexpr int kDegree = 16;

    struct Panel {
        double a, b;                            // in x = log y
        std::array<double, kDegree + 1> coef{};  // Chebyshev coefficients
    };

    void build(double a, double b, double tol, int depth) {
        Panel pan = fit_panel(a, b);
        double worst = 0.0;
        bool ok = true;
        for (int i = 0; i < 8 && ok; ++i) {
            double x = a + (b - a) * (i + 0.5) / 8.0;
            double y = std::exp(x);
            MLValue ref = eval_.evaluate(-y);
            double err = std::abs(clenshaw(pan, x) - ref.value) + ref.error_bound;
            double scale = std::max(std::abs(ref.value), 0.05 / (1.0 + y));
            worst = std::max(worst, err / scale);
            if (err > tol * scale) ok = false;
        }
        if (!ok && depth < 14) {
            double mid = 0.5 * (a + b);
            build(a, mid, tol, depth + 1);
            build(mid, b, tol, depth + 1);
            return;
        }
        worst_error_ = std::max(worst_error_, worst);
        panels_.push_back(pan);
    }

    Panel fit_panel(double a, double b) {
        Panel pan;
        pan.a = a;
        pan.b = b;
        std::array<double, kDegree + 1> f{};
        for (int i = 0; i <= kDegree; ++i) {
            double xi = std::cos(pi * i / kDegree);  // Chebyshev-Lobatto
            double x = 0.5 * (a + b) + 0.5 * (b - a) * xi;
            f[i] = eval_.evaluate(-std::exp(x)).value;
        }
        for (int k = 0; k <= kDegree; ++k) {
            double c = 0.0;
            for (int i = 0; i <= kDegree; ++i) {
                double w = (i == 0 || i == kDegree) ? 0.5 : 1.0;
                c += w * f[i] * std::cos(pi * k * i / kDegree);
            }
            c *= 2.0 / kDegree;
            if (k == 0 || k == kDegree) c *= 0.5;
            pan.coef[k] = c;
        }
        return pan;
    }

    const Panel& find_panel(double x) const {
        std::size_t lo = 0, hi = panels_.size();
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (x < panels_[mid].a) hi = mid; else lo = mid;
        }
        return panels_[lo];
    }

    static double clenshaw(const Panel& pan, double x) {
        double u = (2.0 * x - pan.a - pan.b) / (pan.b - pan.a);
        u = std::clamp(u, -1.0, 1.0);
        double b1 = 0.0, b2 = 0.0;
        for (int k = kDegree; k >= 1; --k) {
            double b0 = 2.0 * u * b1 - b2 + pan.coef[k];
            b2 = b1;
            b1 = b0;
        }
        return u * b1 - b2 + pan.coef[0];
    }

    MLParams params_;
    double y_lo_, y_hi_;
    bool closed_form_ = false;
    double worst_error_ = 0.0;
    std::vector<Panel> panels_;
    MLEvaluator eval_;
};

}  // namespace fracterm
