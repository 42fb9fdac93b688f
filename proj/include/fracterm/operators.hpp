#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fracterm/errors.hpp"
#include "fracterm/mittag_leffler.hpp"
#include "fracterm/spectral.hpp"

namespace fracterm {

/// Precomputed terminal-time data for the backward problem: denominators
/// E_{alpha,1}(-lambda_j T^alpha) per mode, plus certified lookup tables
/// for the three Mittag-Leffler parameter pairs every multiplier needs.
/// Construction fails if any denominator falls under the guard threshold,
/// naming the offending mode (larger T or smaller J fixes it).
class TerminalSetup {
  public:
    TerminalSetup(double alpha, double t_final, const SpectralBasis& basis,
                  double eps_den = 1e-10)
        : alpha_(alpha),
          t_final_(t_final),
          eps_den_(eps_den),
          basis_(&basis),
          table_1_(MLParams{alpha, 1.0}),
          table_a_(MLParams{alpha, alpha}),
          table_am1_(MLParams{alpha, alpha - 1.0}) {
        if (!(alpha > 1.0) || !(alpha <= 2.0))
            throw DomainError("TerminalSetup: alpha must lie in (1,2]");
        if (!(t_final > 0.0)) throw DomainError("TerminalSetup: T must be positive");
        if (!(eps_den > 0.0)) throw DomainError("TerminalSetup: eps_den must be positive");
        denominators_.resize(basis.size());
        for (int j = 0; j < basis.size(); ++j) {
            double den = table_1_(basis.lambda(j) * std::pow(t_final, alpha));
            if (std::abs(den) <= eps_den_)
                throw TerminalTimeInadmissible(
                    "TerminalSetup: |E_{alpha,1}(-lambda_j T^alpha)| <= eps_den at mode j=" +
                        std::to_string(j + 1) + "; increase T or reduce the truncation",
                    j + 1, den);
            denominators_[j] = den;
        }
    }

    double alpha() const { return alpha_; }
    double t_final() const { return t_final_; }
    double eps_den() const { return eps_den_; }
    const SpectralBasis& basis() const { return *basis_; }
    double denominator(int j) const { return denominators_[j]; }

    /// E_{alpha,1}(-y), E_{alpha,alpha}(-y), E_{alpha,alpha-1}(-y)
    double e1(double y) const { return table_1_(y); }
    double ea(double y) const { return table_a_(y); }
    double eam1(double y) const { return table_am1_(y); }

    /// Worst-mode amplification of the backward propagator at t=0.
    double worst_amplification() const {
        double w = 0.0;
        for (double d : denominators_) w = std::max(w, 1.0 / std::abs(d));
        return w;
    }

    // per-mode multipliers of the solution and derivative operators
    double mult_B(int j, double t) const {
        return e1(basis_->lambda(j) * std::pow(t, alpha_)) / denominators_[j];
    }
    double mult_P(int j, double t) const {
        return std::pow(t, alpha_ - 1.0) * ea(basis_->lambda(j) * std::pow(t, alpha_));
    }
    double mult_B0(int j, double t) const {
        return e1(basis_->lambda(j) * std::pow(t, alpha_));
    }
    double mult_D1(int j, double t) const { return -basis_->lambda(j) * mult_P(j, t) / denominators_[j]; }
    double mult_D2(int j, double t) const {
        return std::pow(t, alpha_ - 2.0) * eam1(basis_->lambda(j) * std::pow(t, alpha_));
    }
    double mult_D3(int j, double t) const { return -basis_->lambda(j) * mult_B(j, t); }
    double mult_D4(int j, double t) const { return -basis_->lambda(j) * mult_P(j, t); }

  private:
    double alpha_, t_final_, eps_den_;
    const SpectralBasis* basis_;
    std::vector<double> denominators_;
    MLTable table_1_, table_a_, table_am1_;
};

namespace detail {

template <typename Mult>
SpectralField apply_multiplier(const TerminalSetup& setup, const SpectralField& f, Mult mult) {
    validate(f);
    if (f.basis != &setup.basis())
        throw DomainError("operator application: field basis does not match setup");
    SpectralField out = f;
    for (int j = 0; j < setup.basis().size(); ++j) out.coef[j] = f.coef[j] * mult(j);
    return out;
}

}  // namespace detail

/// Backward propagator: c_j -> c_j E_{alpha,1}(-lambda_j t^alpha)/E_{alpha,1}(-lambda_j T^alpha).
inline SpectralField apply_B(const TerminalSetup& setup, double t, const SpectralField& f) {
    if (!(t >= 0.0) || !(t <= setup.t_final()))
        throw DomainError("apply_B: t must lie in [0,T]");
    return detail::apply_multiplier(setup, f, [&](int j) { return setup.mult_B(j, t); });
}

/// Source-response operator: c_j -> c_j t^{alpha-1} E_{alpha,alpha}(-lambda_j t^alpha).
inline SpectralField apply_P(const TerminalSetup& setup, double t, const SpectralField& f) {
    if (!(t > 0.0)) throw DomainError("apply_P: t must be positive");
    return detail::apply_multiplier(setup, f, [&](int j) { return setup.mult_P(j, t); });
}

/// Forward propagator: c_j -> c_j E_{alpha,1}(-lambda_j t^alpha).
inline SpectralField apply_B0(const TerminalSetup& setup, double t, const SpectralField& f) {
    if (!(t >= 0.0)) throw DomainError("apply_B0: t must be >= 0");
    return detail::apply_multiplier(setup, f, [&](int j) { return setup.mult_B0(j, t); });
}

enum class DerivOp { d1, d2, d3, d4 };

/// Derivative-operator multipliers: d1/d2 assemble the first time
/// derivative of the trajectory, d3/d4 the Caputo derivative of order alpha.
inline SpectralField apply_D(const TerminalSetup& setup, DerivOp which, double t,
                             const SpectralField& f) {
    if (!(t > 0.0)) throw DomainError("apply_D: t must be positive");
    switch (which) {
        case DerivOp::d1:
            return detail::apply_multiplier(setup, f, [&](int j) { return setup.mult_D1(j, t); });
        case DerivOp::d2:
            return detail::apply_multiplier(setup, f, [&](int j) { return setup.mult_D2(j, t); });
        case DerivOp::d3:
            return detail::apply_multiplier(setup, f, [&](int j) { return setup.mult_D3(j, t); });
        case DerivOp::d4:
            return detail::apply_multiplier(setup, f, [&](int j) { return setup.mult_D4(j, t); });
    }
    throw DomainError("apply_D: unknown operator");
}

struct RatioBoundReport {
    double max_ratio;      // worst LHS/RHS over the scan
    int violations;        // grid points with LHS > RHS
    double worst_t;
    int worst_mode;        // 1-based
};

/// Scans the backward-propagator bound
///   |E_{a,1}(-l t^a)/E_{a,1}(-l T^a)| <= (M/m)(lambda_1^{-1}+T^a) l^theta t^{-a(1-theta)}
/// over all modes and the given times, with empirically fitted m, M.
inline RatioBoundReport ratio_bound_check(const TerminalSetup& setup, double theta,
                                          const std::vector<double>& t_grid,
                                          const MLBoundConstants& fitted) {
    if (!(theta > 0.0) || !(theta < 1.0))
        throw DomainError("ratio_bound_check: theta must lie in (0,1)");
    const double a = setup.alpha();
    const double front = fitted.M_alpha / fitted.m_alpha *
                         (1.0 / setup.basis().lambda_min() + std::pow(setup.t_final(), a));
    RatioBoundReport rep{0.0, 0, 0.0, 0};
    for (double t : t_grid) {
        if (!(t > 0.0) || !(t <= setup.t_final()))
            throw DomainError("ratio_bound_check: times must lie in (0,T]");
        for (int j = 0; j < setup.basis().size(); ++j) {
            double lhs = std::abs(setup.mult_B(j, t));
            double rhs = front * std::pow(setup.basis().lambda(j), theta) *
                         std::pow(t, -a * (1.0 - theta));
            double ratio = lhs / rhs;
            if (ratio > rep.max_ratio) {
                rep.max_ratio = ratio;
                rep.worst_t = t;
                rep.worst_mode = j + 1;
            }
            if (ratio > 1.0) ++rep.violations;
        }
    }
    return rep;
}

}  // namespace fracterm
