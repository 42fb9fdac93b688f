#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "fracterm/constants.hpp"
#include "fracterm/nonlinearity.hpp"
#include "fracterm/quadrature.hpp"

namespace fracterm {

/// Smoothness bookkeeping for the estimates: which Hilbert scales the
/// data and the source live on, and the exponents driving the weighted
/// norms and Holder moduli.
struct RegularityParams {
    double nu = 0.0;
    double theta = 0.8;
    double theta_prime = 0.9;
    double nu_prime = 0.5;
    double nu1 = 0.0;
    double nu_alpha = 0.0;
    double sigma = -0.8;
    double q = 1.0;
    double vartheta = 0.9;
    double vartheta_prime = 0.95;
    double eta = 1.2;

    double mu() const { return nu - sigma; }
};

struct ProblemSpec {
    const TerminalSetup* setup = nullptr;
    SpectralField f;
    NonlinearitySpec nonlinearity;
    RegularityParams regularity;
};

struct Trajectory {
    const TimeGrid* grid = nullptr;
    std::vector<SpectralField> states;    // node 0 holds u(0)
    double weight_exponent = 0.0;         // w in the stopping norm t^w || . ||
    std::vector<double> diff_norms;       // weighted ||w^{k+1} - w^{k}|| per iteration
    std::vector<double> ratios;           // consecutive diff quotients
    std::vector<double> weighted_norms;   // weighted sup of the iterate itself
    int iterations = 0;
    double contraction_factor = 0.0;      // max ratio from the third iteration on
    bool radius_exceeded = false;         // warning-grade ball-exit diagnostic
    double radius_bound = std::numeric_limits<double>::infinity();
};

namespace detail {

inline void check_problem(const ProblemSpec& ps) {
    if (ps.setup == nullptr) throw DomainError("solver: missing TerminalSetup");
    validate(ps.f);
    if (ps.f.basis != &ps.setup->basis()) throw DomainError("solver: f basis mismatch");
}

inline std::vector<SpectralField> densities(const NonlinearitySpec& nl, const TimeGrid& g,
                                            const std::vector<SpectralField>& states) {
    std::vector<SpectralField> d;
    d.reserve(states.size());
    for (std::size_t n = 0; n < states.size(); ++n)
        d.push_back(eval_G(nl, g.nodes[n], states[n]));
    return d;
}

inline bool identical(const std::vector<SpectralField>& a, const std::vector<SpectralField>& b) {
    for (std::size_t n = 0; n < a.size(); ++n)
        if (a[n].coef != b[n].coef) return false;
    return true;
}

inline double weighted_sup(const TimeGrid& g, const std::vector<SpectralField>& a,
                           const std::vector<SpectralField>* b, double w_exp, double nu) {
    double m = 0.0;
    for (int n = 1; n <= g.node_count; ++n) {
        SpectralField d = a[n];
        if (b) {
            for (std::size_t j = 0; j < d.coef.size(); ++j) d.coef[j] -= (*b)[n].coef[j];
        }
        m = std::max(m, std::pow(g.nodes[n], w_exp) * norm_hs(d, nu));
    }
    return m;
}

/// One application of the fixed-point map: B f + int P G - B int P G.
inline std::vector<SpectralField> apply_map(const ProblemSpec& ps, const ConvolutionPlan& plan,
                                            const std::vector<SpectralField>& dens) {
    const TimeGrid& g = plan.grid();
    auto p_total = plan.convolve_P(dens, g.node_count);
    std::vector<SpectralField> w;
    w.reserve(g.node_count + 1);
    for (int n = 0; n <= g.node_count; ++n) {
        auto x = apply_B(*ps.setup, g.nodes[n], ps.f);
        auto conv = plan.convolve_P(dens, n);
        auto tail = apply_B(*ps.setup, g.nodes[n], p_total);
        for (std::size_t j = 0; j < x.coef.size(); ++j) x.coef[j] += conv.coef[j] - tail.coef[j];
        w.push_back(std::move(x));
    }
    return w;
}

inline Trajectory iterate_tvp(const ProblemSpec& ps, const ConvolutionPlan& plan, double tol,
                              int max_iter, double w_exp, double radius) {
    const TimeGrid& g = plan.grid();
    Trajectory traj;
    traj.grid = &g;
    traj.weight_exponent = w_exp;
    traj.radius_bound = radius;
    traj.states.assign(g.node_count + 1, ps.f);  // w^{(1)} = f
    auto dens = densities(ps.nonlinearity, g, traj.states);
    bool converged = false;
    for (int it = 1; it <= max_iter && !converged; ++it) {
        auto w_new = apply_map(ps, plan, dens);
        double d = weighted_sup(g, w_new, &traj.states, w_exp, ps.regularity.nu);
        if (!std::isfinite(d))
            throw NonConvergence("iteration diverged to non-finite values", it,
                                 traj.ratios.empty() ? 0.0 : traj.ratios.back());
        traj.diff_norms.push_back(d);
        if (traj.diff_norms.size() >= 2)
            traj.ratios.push_back(d / traj.diff_norms[traj.diff_norms.size() - 2]);
        traj.states = std::move(w_new);
        traj.weighted_norms.push_back(
            weighted_sup(g, traj.states, nullptr, w_exp, ps.regularity.nu));
        if (traj.weighted_norms.back() > radius) traj.radius_exceeded = true;
        traj.iterations = it;
        auto dens_new = densities(ps.nonlinearity, g, traj.states);
        // an unchanged density means the map is already at its fixed point
        converged = d <= tol || identical(dens_new, dens);
        dens = std::move(dens_new);
    }
    if (!converged)
        throw NonConvergence("fixed-point iteration did not reach the tolerance", max_iter,
                             traj.ratios.empty() ? 0.0 : traj.ratios.back());
    for (std::size_t i = 1; i < traj.ratios.size(); ++i)
        traj.contraction_factor = std::max(traj.contraction_factor, traj.ratios[i]);
    if (traj.ratios.size() == 1) traj.contraction_factor = traj.ratios[0];
    return traj;
}

}  // namespace detail

inline Trajectory solve_tvp_picard(const ProblemSpec& ps, const TimeGrid& grid, double tol,
                                   int max_iter) {
    detail::check_problem(ps);
    const double a = ps.setup->alpha(), th = ps.regularity.theta;
    if (!(th > (a - 1.0) / a && th < 1.0))
        throw DomainError("solve_tvp_picard: need (alpha-1)/alpha < theta < 1");
    if (ps.nonlinearity.is_nonlinear())
        throw DomainError("solve_tvp_picard: Lipschitz iteration needs a globally Lipschitz kind");
    ConvolutionPlan plan(*ps.setup, grid);
    return detail::iterate_tvp(ps, plan, tol, max_iter, a * (1.0 - th),
                               std::numeric_limits<double>::infinity());
}

inline Trajectory solve_tvp_contraction(const ProblemSpec& ps, const TimeGrid& grid, double tol,
                                        int max_iter,
                                        double radius = std::numeric_limits<double>::infinity()) {
    detail::check_problem(ps);
    const double a = ps.setup->alpha(), vt = ps.regularity.vartheta;
    if (!(vt > ps.regularity.mu() && vt < 1.0))
        throw DomainError("solve_tvp_contraction: need vartheta in (nu - sigma, 1)");
    if (ps.nonlinearity.cls != HypothesisClass::h3)
        throw DomainError("solve_tvp_contraction: critical iteration expects an H3 source");
    ConvolutionPlan plan(*ps.setup, grid);
    return detail::iterate_tvp(ps, plan, tol, max_iter, a * vt, radius);
}

/// Causal forward march for the initial value problem; the left-node
/// rule makes each node depend only on earlier ones, so no iteration.
inline Trajectory solve_ivp_forward(const TerminalSetup& setup, const TimeGrid& grid,
                                    const SpectralField& u0, const NonlinearitySpec& nl) {
    validate(u0);
    if (u0.basis != &setup.basis()) throw DomainError("solve_ivp_forward: u0 basis mismatch");
    ConvolutionPlan plan(setup, grid);
    Trajectory traj;
    traj.grid = &grid;
    traj.states.reserve(grid.node_count + 1);
    traj.states.push_back(u0);
    std::vector<SpectralField> dens;
    dens.push_back(eval_G(nl, 0.0, u0));
    for (int n = 1; n <= grid.node_count; ++n) {
        auto u = apply_B0(setup, grid.nodes[n], u0);
        auto conv = plan.convolve_P(dens, n);
        for (std::size_t j = 0; j < u.coef.size(); ++j) u.coef[j] += conv.coef[j];
        dens.push_back(eval_G(nl, grid.nodes[n], u));
        traj.states.push_back(std::move(u));
    }
    traj.iterations = 1;
    return traj;
}

/// u(0)_j = [f_j - (int_0^T P(T-r) G dr)_j] / E_{alpha,1}(-lambda_j T^alpha).
inline SpectralField reconstruct_initial(const ProblemSpec& ps, const ConvolutionPlan& plan,
                                         const Trajectory& traj) {
    detail::check_problem(ps);
    auto dens = detail::densities(ps.nonlinearity, plan.grid(), traj.states);
    auto p_total = plan.convolve_P(dens, plan.grid().node_count);
    SpectralField g = ps.f;
    for (std::size_t j = 0; j < g.coef.size(); ++j) g.coef[j] -= p_total.coef[j];
    return apply_B(*ps.setup, 0.0, g);
}

enum class DerivOrder { first, alpha };

/// Per-node derivative assemblies; node 0 is a zero placeholder since
/// both kernels are singular at t = 0.
inline std::vector<SpectralField> reconstruct_derivatives(const ProblemSpec& ps,
                                                          const ConvolutionPlan& plan,
                                                          const Trajectory& traj,
                                                          DerivOrder order) {
    detail::check_problem(ps);
    const TimeGrid& g = plan.grid();
    const TerminalSetup& setup = *ps.setup;
    auto dens = detail::densities(ps.nonlinearity, g, traj.states);
    auto p_total = plan.convolve_P(dens, g.node_count);
    std::vector<SpectralField> out;
    out.reserve(g.node_count + 1);
    out.push_back(SpectralField::zero(setup.basis()));
    for (int n = 1; n <= g.node_count; ++n) {
        double t = g.nodes[n];
        SpectralField v = SpectralField::zero(setup.basis());
        if (order == DerivOrder::first) {
            auto head = apply_D(setup, DerivOp::d1, t, ps.f);
            auto conv = plan.convolve_D2(dens, n);
            auto tail = apply_D(setup, DerivOp::d1, t, p_total);
            for (std::size_t j = 0; j < v.coef.size(); ++j)
                v.coef[j] = head.coef[j] + conv.coef[j] - tail.coef[j];
        } else {
            auto head = apply_D(setup, DerivOp::d3, t, ps.f);
            auto conv = plan.convolve_P(dens, n);  // D4 kernel = -lambda x P kernel
            auto tail = apply_D(setup, DerivOp::d3, t, p_total);
            for (std::size_t j = 0; j < v.coef.size(); ++j)
                v.coef[j] = head.coef[j] - setup.basis().lambda(j) * conv.coef[j] -
                            tail.coef[j] + dens[n].coef[j];
        }
        out.push_back(std::move(v));
    }
    return out;
}

/// || d^alpha u/dt^alpha + Lambda u - G ||_{H^0} per node (node 0 = 0).
inline std::vector<double> equation_residual(const ProblemSpec& ps, const Trajectory& traj,
                                             const std::vector<SpectralField>& deriv_alpha) {
    detail::check_problem(ps);
    const TimeGrid& g = *traj.grid;
    std::vector<double> res(g.node_count + 1, 0.0);
    for (int n = 1; n <= g.node_count; ++n) {
        auto gn = eval_G(ps.nonlinearity, g.nodes[n], traj.states[n]);
        SpectralField r = SpectralField::zero(ps.setup->basis());
        for (std::size_t j = 0; j < r.coef.size(); ++j)
            r.coef[j] = deriv_alpha[n].coef[j] +
                        ps.setup->basis().lambda(j) * traj.states[n].coef[j] - gn.coef[j];
        res[n] = norm_hs(r, 0.0);
    }
    return res;
}

}  // namespace fracterm
