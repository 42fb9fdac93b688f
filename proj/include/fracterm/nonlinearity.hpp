#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fracterm/errors.hpp"
#include "fracterm/spectral.hpp"

namespace fracterm {

enum class NonlinearityKind {
    zero,
    linear_inhomogeneous,  // G(t,u) = l1 u + g with a fixed source g
    lipschitz_scaled,      // G(t,u) = l1 u
    ginzburg_landau,       // G(t,u) = rho(t) |u|^s u
    burgers,               // G(t,u) = -rho(t) u u_x
};

enum class HypothesisClass { h1, h2, h3 };

struct NonlinearitySpec {
    NonlinearityKind kind = NonlinearityKind::zero;
    double l1 = 0.0;                      // Lipschitz multiplier
    std::vector<double> inhomogeneity;    // coefficients of g
    double s = 1.0;                       // growth exponent
    double c_rho = 0.0;                   // rho(t) = c_rho t^b
    double b = 0.0;
    HypothesisClass cls = HypothesisClass::h1;
    double sigma = 0.0, nu = 0.0, zeta = 0.0, k0 = 0.0;

    static NonlinearitySpec zero_source() { return {}; }
    static NonlinearitySpec lipschitz(double l1) {
        NonlinearitySpec n;
        n.kind = NonlinearityKind::lipschitz_scaled;
        n.l1 = l1;
        return n;
    }
    static NonlinearitySpec linear_inhomogeneous(double l1, std::vector<double> g) {
        NonlinearitySpec n;
        n.kind = NonlinearityKind::linear_inhomogeneous;
        n.l1 = l1;
        n.inhomogeneity = std::move(g);
        return n;
    }
    static NonlinearitySpec ginzburg_landau(double s, double c_rho, double b) {
        NonlinearitySpec n;
        n.kind = NonlinearityKind::ginzburg_landau;
        n.s = s;
        n.c_rho = c_rho;
        n.b = b;
        n.cls = HypothesisClass::h3;
        return n;
    }
    static NonlinearitySpec burgers(double c_rho, double b) {
        NonlinearitySpec n;
        n.kind = NonlinearityKind::burgers;
        n.s = 1.0;
        n.c_rho = c_rho;
        n.b = b;
        n.cls = HypothesisClass::h3;
        return n;
    }

    /// rho(t); the pointwise value at t=0 is taken as 0 for negative b
    /// (a measure-zero point, irrelevant to the convolutions).
    double rho(double t) const {
        if (t == 0.0) return b > 0.0 ? 0.0 : (b == 0.0 ? c_rho : 0.0);
        return c_rho * std::pow(t, b);
    }

    bool is_nonlinear() const {
        return kind == NonlinearityKind::ginzburg_landau || kind == NonlinearityKind::burgers;
    }
};

/// G(t, u) evaluated pseudospectrally on an explicit collocation grid;
/// nonlinear kinds require at least 3x the retained bandwidth.
inline SpectralField eval_G(const NonlinearitySpec& spec, double t, const SpectralField& u,
                            const CollocationGrid& grid) {
    if (!(t >= 0.0)) throw DomainError("eval_G: negative time");
    validate(u);
    const SpectralBasis& basis = *u.basis;
    if (spec.is_nonlinear()) {
        if (grid.basis != &basis) throw DomainError("eval_G: grid basis mismatch");
        if (grid.points_per_axis < 3 * CollocationGrid::max_mode_index(basis))
            throw AliasError("eval_G: nonlinear kinds need M >= 3J collocation points");
    }
    switch (spec.kind) {
        case NonlinearityKind::zero:
            return SpectralField::zero(basis);
        case NonlinearityKind::lipschitz_scaled: {
            SpectralField out = u;
            for (auto& c : out.coef) c *= spec.l1;
            return out;
        }
        case NonlinearityKind::linear_inhomogeneous: {
            if (spec.inhomogeneity.size() != u.coef.size())
                throw DomainError("eval_G: inhomogeneity length does not match basis");
            SpectralField out = u;
            for (std::size_t j = 0; j < out.coef.size(); ++j)
                out.coef[j] = spec.l1 * u.coef[j] + spec.inhomogeneity[j];
            return out;
        }
        case NonlinearityKind::ginzburg_landau: {
            auto samples = to_samples(u, grid);
            double r = spec.rho(t);
            for (auto& v : samples) v = r * std::pow(std::abs(v), spec.s) * v;
            return from_samples(samples, basis, grid);
        }
        case NonlinearityKind::burgers: {
            if (basis.dimension() != 1)
                throw DomainError("eval_G: burgers kind requires a 1d basis");
            auto samples = to_samples(u, grid);
            // termwise derivative of the sine series is a cosine series
            double length = basis.extent(0);
            std::vector<double> deriv(grid.total_points(), 0.0);
            for (int i = 0; i < grid.total_points(); ++i) {
                double x = grid.coordinate(0, i);
                double d = 0.0;
                for (int j = 0; j < basis.size(); ++j) {
                    double k = basis.mode(j).index[0] * pi / length;
                    d += u.coef[j] * std::sqrt(2.0 / length) * k * std::cos(k * x);
                }
                deriv[i] = d;
            }
            double r = spec.rho(t);
            for (int i = 0; i < grid.total_points(); ++i) samples[i] = -r * samples[i] * deriv[i];
            return from_samples(samples, basis, grid);
        }
    }
    throw DomainError("eval_G: unknown kind");
}

/// Convenience overload on the default dealiased grid.
inline SpectralField eval_G(const NonlinearitySpec& spec, double t, const SpectralField& u) {
    validate(u);
    if (spec.is_nonlinear()) return eval_G(spec, t, u, CollocationGrid::dealiased(*u.basis));
    // linear kinds never touch the grid; pass a dummy via the same path
    static const SpectralBasis unit = SpectralBasis::dirichlet_laplacian_1d(1.0, 1);
    static const CollocationGrid dummy = CollocationGrid::dealiased(unit);
    return eval_G(spec, t, u, dummy);
}

struct ValidationReport {
    bool pass;
    std::string route;  // which theorem case the parameters select
    std::vector<std::string> violations;
};

struct ApplicationParams {
    double n_dim = 4.0;   // spatial dimension N of the theorem
    double alpha = 1.5;
    double s = 1.0;
    double varrho = 0.0;  // only the subcritical route uses it
    double nu = 0.0;
    double sigma = 0.0;
    double vartheta = 0.0;
    double vartheta_prime = 0.0;
    double b = 0.0;
};

/// Checks every displayed interval and inequality of the application
/// theorems (parameter chains plus the supporting Sobolev embeddings);
/// pure arithmetic, reported rather than thrown.
inline ValidationReport validate_application_params(NonlinearityKind kind,
                                                    const ApplicationParams& p) {
    ValidationReport r{true, "", {}};
    auto fail = [&](const std::string& msg) {
        r.pass = false;
        r.violations.push_back(msg);
    };
    const double N = p.n_dim;
    const double mu = p.nu - p.sigma;
    auto common_tail = [&]() {
        if (!(p.vartheta > mu && p.vartheta < (N + 4.0) / 8.0))
            fail("vartheta in (mu, (N+4)/8)");
        if (!(p.vartheta_prime >= p.vartheta + (4.0 - N) / 8.0 && p.vartheta_prime < 1.0))
            fail("vartheta' in [vartheta + (4-N)/8, 1)");
    };

    if (kind == NonlinearityKind::ginzburg_landau) {
        if (!(N >= 2.0 && N <= 4.0)) fail("2 <= N <= 4");
        if (!(p.s > 0.0)) fail("s > 0");
        double mu0 = std::max(p.nu, p.s * (N / 4.0 - p.nu));
        if (p.s < 4.0 / N) {
            r.route = "subcritical";  // 0 < s < 4/N
            if (!(p.varrho > 0.0 && p.varrho <= N * p.s / 8.0)) fail("varrho in (0, Ns/8]");
            if (!(p.nu >= N / 4.0 - p.varrho / p.s && p.nu < N / 4.0))
                fail("nu in [N/4 - varrho/s, N/4)");
        } else {
            r.route = "supercritical";  // s >= 4/N
            if (!(p.nu >= N / 4.0 - 1.0 / (2.0 * p.s) && p.nu < N / 4.0))
                fail("nu in [N/4 - 1/(2s), N/4)");
        }
        if (!(mu > mu0 && mu < (N + 4.0) / 8.0)) fail("mu in (mu0, (N+4)/8)");
        common_tail();
        double b_floor = -std::min(1.0 / p.alpha - (1.0 + p.s) * p.vartheta,
                                   (p.vartheta - mu) - p.s * p.vartheta);
        if (!(p.b > b_floor)) fail("b > -min{1/alpha - (1+s) vartheta, (vartheta-mu) - s vartheta}");

        // supporting embedding chains
        EmbeddingParams dual;
        dual.sigma = 2.0 * p.sigma;
        dual.q = 2.0 * N / (N - 4.0 * p.sigma);
        dual.n_dim = N;
        if (!check_embedding(EmbeddingKind::l_to_w, dual).pass)
            fail("embedding L^{2N/(N-4 sigma)} -> W^{2 sigma,2}");
        EmbeddingParams growth;
        growth.sigma = 2.0 * p.nu;
        growth.q = 2.0 * N * (1.0 + p.s) / (N - 4.0 * p.sigma);
        growth.n_dim = N;
        if (!check_embedding(EmbeddingKind::w_to_l, growth).pass)
            fail("embedding W^{2 nu,2} -> L^{2N(1+s)/(N-4 sigma)}");
    } else if (kind == NonlinearityKind::burgers) {
        r.route = "burgers";
        if (!(N >= 3.0 && N <= 4.0)) fail("3 <= N <= 4");
        double mu2 = std::max(p.nu, (N + 2.0) / 4.0 - p.nu);
        if (!(p.nu >= 0.5 && p.nu < N / 4.0)) fail("nu in [1/2, N/4)");
        if (!(mu >= mu2 && mu < (N + 4.0) / 8.0)) fail("mu in [mu2, (N+4)/8)");
        common_tail();
        double b_floor = -std::min(-mu, 1.0 / p.alpha - 2.0 * p.vartheta);
        if (!(p.b > b_floor)) fail("b > -min{-mu, 1/alpha - 2 vartheta}");

        EmbeddingParams dual;
        dual.sigma = 2.0 * p.sigma;
        dual.q = 2.0 * N / (N - 4.0 * p.sigma);
        dual.n_dim = N;
        if (!check_embedding(EmbeddingKind::l_to_w, dual).pass)
            fail("embedding L^{2N/(N-4 sigma)} -> W^{2 sigma,2}");
        EmbeddingParams grad;
        grad.sigma = 2.0 * p.nu;
        grad.gamma = 1.0;
        grad.p = 2.0;
        grad.q = 2.0 * N / (N + 2.0 - 4.0 * p.nu);
        grad.n_dim = N;
        if (!check_embedding(EmbeddingKind::w_to_w, grad).pass)
            fail("embedding W^{2 nu,2} -> W^{1, 2N/(N+2-4 nu)}");
        EmbeddingParams lq;
        lq.sigma = 2.0 * p.nu;
        lq.q = 2.0 * N / (4.0 * mu - 2.0);
        lq.n_dim = N;
        if (!check_embedding(EmbeddingKind::w_to_l, lq).pass)
            fail("embedding W^{2 nu,2} -> L^{2N/(4 mu - 2)}");
    } else {
        r.route = "generic";  // no application theorem attached to this kind
    }
    return r;
}

}  // namespace fracterm
