#pragma once

#include <cmath>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracterm/errors.hpp"
#include "fracterm/operators.hpp"

namespace fracterm {

/// Graded time mesh t_n = T (n/N)^gamma clustering near 0, where both the
/// convolution kernel and the backward data singularity live.
struct TimeGrid {
    double t_final;
    int node_count;     // N; the grid holds N+1 nodes
    double gamma_mesh;
    std::vector<double> nodes;

    TimeGrid(double t_final_, int n, double gamma = 2.0)
        : t_final(t_final_), node_count(n), gamma_mesh(gamma) {
        if (!(t_final > 0.0)) throw DomainError("TimeGrid: T must be positive");
        if (n < 1) throw DomainError("TimeGrid: need at least one interval");
        if (!(gamma >= 1.0)) throw DomainError("TimeGrid: grading exponent must be >= 1");
        nodes.resize(n + 1);
        for (int i = 0; i <= n; ++i)
            nodes[i] = t_final * std::pow(static_cast<double>(i) / n, gamma);
        nodes[n] = t_final;
    }

    int index_of(double t) const {
        for (int i = 0; i <= node_count; ++i)
            if (std::abs(nodes[i] - t) <= 1e-12 * (1.0 + t_final)) return i;
        throw GridError("TimeGrid: requested time is not a grid node");
    }
};

/// (b-a)^{z1+z2-1} B(z1,z2), the closed form of the weakly singular
/// integral over [a,b]; evaluated through log-Gamma.
inline double beta_singular_integral(double z1, double z2, double a, double b) {
    if (!(z1 > 0.0) || !(z2 > 0.0))
        throw DomainError("beta_singular_integral: exponents must be positive");
    if (!(0.0 <= a) || !(a < b)) throw DomainError("beta_singular_integral: need 0 <= a < b");
    double log_beta = std::lgamma(z1) + std::lgamma(z2) - std::lgamma(z1 + z2);
    return std::pow(b - a, z1 + z2 - 1.0) * std::exp(log_beta);
}

/// Product-rectangle convolution machinery with exact Mittag-Leffler
/// kernel moments per mode and subinterval: the kernel is integrated in
/// closed form through the antiderivative of Lemma-type differentiation
/// identities, so only the density is approximated (by its left-node
/// value, keeping the rule causal).
class ConvolutionPlan {
  public:
    ConvolutionPlan(const TerminalSetup& setup, const TimeGrid& grid)
        : setup_(&setup), grid_(&grid) {
        const int n = grid.node_count;
        const int j_count = setup.basis().size();
        row_offset_.resize(n + 1, 0);
        for (int m = 1; m <= n; ++m)
            row_offset_[m] = row_offset_[m - 1] + static_cast<std::size_t>(m - 1) * j_count;
        moments_.resize(row_offset_[n] + static_cast<std::size_t>(n) * j_count);
        for (int m = 1; m <= n; ++m) {
            double t = grid.nodes[m];
            for (int k = 0; k < m; ++k) {
                double s_hi = t - grid.nodes[k];      // larger elapsed time
                double s_lo = t - grid.nodes[k + 1];  // smaller (0 when k = m-1)
                for (int j = 0; j < j_count; ++j) {
                    double lam = setup.basis().lambda(j);
                    double e_lo = setup.e1(lam * std::pow(s_lo, setup.alpha()));
                    double e_hi = setup.e1(lam * std::pow(s_hi, setup.alpha()));
                    moments_[index(m, k, j)] = (e_lo - e_hi) / lam;
                }
            }
        }
    }

    const TimeGrid& grid() const { return *grid_; }

    /// Exact kernel moment of the source-response kernel over
    /// [t_k, t_{k+1}] with target node t_m, mode j.
    double moment(int m, int k, int j) const { return moments_[index(m, k, j)]; }

    /// integral_0^{t_m} P(t_m - r) density(r) dr, density at left nodes.
    SpectralField convolve_P(const std::vector<SpectralField>& density, int m_target) const {
        check_density(density, m_target);
        SpectralField out = SpectralField::zero(setup_->basis());
        for (int k = 0; k < m_target; ++k)
            for (int j = 0; j < setup_->basis().size(); ++j)
                out.coef[j] += density[k].coef[j] * moment(m_target, k, j);
        return out;
    }

    /// integral_0^T B(t,T) P(T - r) density(r) dr.
    SpectralField convolve_BP(const std::vector<SpectralField>& density, double t) const {
        return apply_B(*setup_, t, convolve_P(density, grid_->node_count));
    }

    /// Same rule for the kernel of the first-derivative assembly,
    /// s^{alpha-2} E_{alpha,alpha-1}(-lambda s^alpha); its antiderivative
    /// is the source-response kernel itself, so moments are again exact.
    SpectralField convolve_D2(const std::vector<SpectralField>& density, int m_target) const {
        check_density(density, m_target);
        const double a = setup_->alpha();
        SpectralField out = SpectralField::zero(setup_->basis());
        for (int k = 0; k < m_target; ++k) {
            double s_hi = grid_->nodes[m_target] - grid_->nodes[k];
            double s_lo = grid_->nodes[m_target] - grid_->nodes[k + 1];
            for (int j = 0; j < setup_->basis().size(); ++j) {
                double lam = setup_->basis().lambda(j);
                double k_hi = std::pow(s_hi, a - 1.0) * setup_->ea(lam * std::pow(s_hi, a));
                double k_lo = (s_lo == 0.0)
                                  ? 0.0
                                  : std::pow(s_lo, a - 1.0) * setup_->ea(lam * std::pow(s_lo, a));
                out.coef[j] += density[k].coef[j] * (k_hi - k_lo);
            }
        }
        return out;
    }

  private:
    std::size_t index(int m, int k, int j) const {
        return row_offset_[m] + static_cast<std::size_t>(k) * setup_->basis().size() + j;
    }
    void check_density(const std::vector<SpectralField>& density, int m_target) const {
        if (m_target < 0 || m_target > grid_->node_count)
            throw GridError("convolve: target outside the grid");
        if (static_cast<int>(density.size()) < m_target)
            throw GridError("convolve: density not defined at every node up to the target");
        for (int k = 0; k < m_target; ++k)
            if (density[k].basis != &setup_->basis())
                throw DomainError("convolve: density basis mismatch");
    }

    const TerminalSetup* setup_;
    const TimeGrid* grid_;
    std::vector<double> moments_;
    std::vector<std::size_t> row_offset_;
};

/// Product-rectangle rule against the pure power kernel (t-r)^{a-1},
/// the lambda -> 0 leading term of the source kernel; scalar density.
/// Serves as the bridge to the Beta-function closed form in tests.
inline double convolve_power_kernel(const TimeGrid& grid, double exponent_a,
                                    const std::vector<double>& density, int m_target) {
    if (!(exponent_a > 0.0)) throw DomainError("convolve_power_kernel: exponent must be positive");
    if (m_target < 0 || m_target > grid.node_count ||
        static_cast<int>(density.size()) < m_target)
        throw GridError("convolve_power_kernel: bad target or density length");
    double t = grid.nodes[m_target];
    double s = 0.0;
    for (int k = 0; k < m_target; ++k) {
        double hi = std::pow(t - grid.nodes[k], exponent_a);
        double lo = std::pow(t - grid.nodes[k + 1], exponent_a);
        s += density[k] * (hi - lo) / exponent_a;
    }
    return s;
}

struct Ap2Report {
    std::vector<double> h_values;
    std::vector<double> integrals;
    std::vector<double> gaps;    // |I(h) - I(0)|
    double limit;                // closed-form I(0)
    bool monotone;               // gaps non-increasing along the sequence
    bool converged;              // final gap under the stated threshold
};

/// Numerically confirms that integral_0^t (t+h-r)^{a-1} r^{b-1} dr tends
/// to the Beta closed form as h -> 0+, monotonically.
inline Ap2Report limit_check_ap2(double a, double b, double t,
                                 const std::vector<double>& h_sequence,
                                 double threshold = 1e-6) {
    if (!(a > 0.0) || !(b > 0.0) || !(t > 0.0))
        throw DomainError("limit_check_ap2: a, b, t must be positive");
    Ap2Report rep;
    rep.limit = beta_singular_integral(b, a, 0.0, t);
    boost::math::quadrature::tanh_sinh<double> quad;
    double prev_h = std::numeric_limits<double>::infinity();
    rep.monotone = true;
    for (double h : h_sequence) {
        if (!(h >= 0.0) || h >= prev_h)
            throw DomainError("limit_check_ap2: h sequence must be decreasing and non-negative");
        prev_h = h;
        double val = (h == 0.0)
                         ? rep.limit
                         : quad.integrate(
                               [&](double r) {
                                   return std::pow(t + h - r, a - 1.0) * std::pow(r, b - 1.0);
                               },
                               0.0, t, 1e-12);
        rep.h_values.push_back(h);
        rep.integrals.push_back(val);
        double gap = std::abs(val - rep.limit);
        if (!rep.gaps.empty() && gap > rep.gaps.back() * (1.0 + 1e-12)) rep.monotone = false;
        rep.gaps.push_back(gap);
    }
    rep.converged = !rep.gaps.empty() && rep.gaps.back() <= threshold;
    return rep;
}

}  // namespace fracterm
