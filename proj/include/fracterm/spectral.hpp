#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "fracterm/errors.hpp"
#include "fracterm/gamma.hpp"

namespace fracterm {

struct Mode {
    std::array<int, 2> index;  // multi-index; index[1] = 0 in 1D
    double lambda;
};

/// Eigenpairs {lambda_j, phi_j} of the spatial operator on a separable
/// domain, plus collocation transforms. Immutable after construction.
class SpectralBasis {
  public:
    static SpectralBasis dirichlet_laplacian_1d(double length, int j_count) {
        if (!(length > 0.0)) throw DomainError("dirichlet_laplacian_1d: length must be positive");
        if (j_count < 1) throw DomainError("dirichlet_laplacian_1d: need at least one mode");
        SpectralBasis b;
        b.dimension_ = 1;
        b.extent_ = {length, 0.0};
        b.modes_.reserve(j_count);
        for (int j = 1; j <= j_count; ++j) {
            double k = j * pi / length;
            b.modes_.push_back({{j, 0}, k * k});
        }
        b.has_eigenfunctions_ = true;
        return b;
    }

    static SpectralBasis dirichlet_laplacian_2d(double lx, double ly, int j_count) {
        if (!(lx > 0.0) || !(ly > 0.0))
            throw DomainError("dirichlet_laplacian_2d: lengths must be positive");
        if (j_count < 1) throw DomainError("dirichlet_laplacian_2d: need at least one mode");
        // enumerate enough tensor modes to cover the truncation, then sort
        int side = static_cast<int>(std::ceil(std::sqrt(2.0 * j_count))) + 2;
        std::vector<Mode> all;
        for (int m = 1; m <= side; ++m)
            for (int n = 1; n <= side; ++n) {
                double km = m * pi / lx, kn = n * pi / ly;
                all.push_back({{m, n}, km * km + kn * kn});
            }
        std::sort(all.begin(), all.end(), [](const Mode& a, const Mode& b) {
            if (a.lambda != b.lambda) return a.lambda < b.lambda;
            return a.index < b.index;  // deterministic tie-break
        });
        SpectralBasis b;
        b.dimension_ = 2;
        b.extent_ = {lx, ly};
        b.modes_.assign(all.begin(), all.begin() + j_count);
        b.has_eigenfunctions_ = true;
        return b;
    }

    /// Basis from a user-supplied eigenvalue table; norms and per-mode
    /// operators work, collocation transforms do not.
    static SpectralBasis from_spectrum(std::vector<double> lambdas) {
        if (lambdas.empty()) throw DomainError("from_spectrum: empty eigenvalue table");
        SpectralBasis b;
        b.dimension_ = 1;
        b.extent_ = {0.0, 0.0};
        double prev = 0.0;
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            if (!(lambdas[i] > 0.0) || lambdas[i] < prev)
                throw DomainError("from_spectrum: eigenvalues must be positive and ascending");
            prev = lambdas[i];
            b.modes_.push_back({{static_cast<int>(i) + 1, 0}, lambdas[i]});
        }
        b.has_eigenfunctions_ = false;
        return b;
    }

    int dimension() const { return dimension_; }
    int size() const { return static_cast<int>(modes_.size()); }
    double extent(int axis) const { return extent_[axis]; }
    const Mode& mode(int j) const { return modes_[j]; }
    double lambda(int j) const { return modes_[j].lambda; }
    double lambda_min() const { return modes_.front().lambda; }
    bool has_eigenfunctions() const { return has_eigenfunctions_; }

    /// phi_j at a point (second coordinate ignored in 1D).
    double eigenfunction(int j, double x, double y = 0.0) const {
        if (!has_eigenfunctions_)
            throw DomainError("eigenfunction: basis was loaded from a spectrum table");
        const Mode& m = modes_[j];
        double v = std::sqrt(2.0 / extent_[0]) * std::sin(m.index[0] * pi * x / extent_[0]);
        if (dimension_ == 2)
            v *= std::sqrt(2.0 / extent_[1]) * std::sin(m.index[1] * pi * y / extent_[1]);
        return v;
    }

    /// Fitted Weyl constant: min over retained modes of lambda_j / j^{2/d}.
    double weyl_constant() const {
        double c = std::numeric_limits<double>::infinity();
        for (int j = 0; j < size(); ++j)
            c = std::min(c, modes_[j].lambda / std::pow(j + 1.0, 2.0 / dimension_));
        return c;
    }

  private:
    SpectralBasis() = default;
    int dimension_ = 1;
    std::array<double, 2> extent_{};
    std::vector<Mode> modes_;
    bool has_eigenfunctions_ = false;
};

/// Coefficient sequence in the eigenbasis; the basis must outlive the field.
struct SpectralField {
    const SpectralBasis* basis = nullptr;
    std::vector<double> coef;

    static SpectralField zero(const SpectralBasis& b) {
        return {&b, std::vector<double>(b.size(), 0.0)};
    }
    static SpectralField single_mode(const SpectralBasis& b, int j, double value = 1.0) {
        SpectralField f = zero(b);
        f.coef.at(j) = value;
        return f;
    }
};

inline void validate(const SpectralField& f) {
    if (f.basis == nullptr) throw DomainError("SpectralField: missing basis");
    if (static_cast<int>(f.coef.size()) != f.basis->size())
        throw DomainError("SpectralField: coefficient count does not match basis");
    for (double c : f.coef)
        if (!std::isfinite(c)) throw DomainError("SpectralField: non-finite coefficient");
}

/// Hilbert-scale norm sqrt(sum lambda_j^{2 gamma} c_j^2); gamma may be negative.
inline double norm_hs(const SpectralField& f, double gamma) {
    validate(f);
    double s = 0.0;
    for (int j = 0; j < f.basis->size(); ++j)
        s += std::pow(f.basis->lambda(j), 2.0 * gamma) * f.coef[j] * f.coef[j];
    return std::sqrt(s);
}

/// Uniform interior collocation grid; exact sine quadrature up to the
/// number of points per axis.
struct CollocationGrid {
    const SpectralBasis* basis;
    int points_per_axis;

    CollocationGrid(const SpectralBasis& b, int m) : basis(&b), points_per_axis(m) {
        if (!b.has_eigenfunctions())
            throw DomainError("CollocationGrid: basis has no eigenfunction data");
        int floor_m = 2 * max_mode_index(b) + 1;
        if (m < floor_m) throw AliasError("CollocationGrid: need at least 2J+1 interior points");
    }

    static CollocationGrid dealiased(const SpectralBasis& b) {
        return CollocationGrid(b, 3 * max_mode_index(b));
    }

    static int max_mode_index(const SpectralBasis& b) {
        int mx = 1;
        for (int j = 0; j < b.size(); ++j)
            mx = std::max({mx, b.mode(j).index[0], b.mode(j).index[1]});
        return mx;
    }

    int total_points() const {
        return basis->dimension() == 1 ? points_per_axis : points_per_axis * points_per_axis;
    }
    double coordinate(int axis, int i) const {
        return (i + 1) * basis->extent(axis) / (points_per_axis + 1);
    }
    double weight() const {
        double w = basis->extent(0) / (points_per_axis + 1);
        if (basis->dimension() == 2) w *= basis->extent(1) / (points_per_axis + 1);
        return w;
    }
};

/// Synthesis: field coefficients to point samples (row-major in 2D).
inline std::vector<double> to_samples(const SpectralField& f, const CollocationGrid& grid) {
    validate(f);
    const SpectralBasis& b = *f.basis;
    std::vector<double> out(grid.total_points(), 0.0);
    int m = grid.points_per_axis;
    if (b.dimension() == 1) {
        for (int i = 0; i < m; ++i) {
            double x = grid.coordinate(0, i);
            double v = 0.0;
            for (int j = 0; j < b.size(); ++j) v += f.coef[j] * b.eigenfunction(j, x);
            out[i] = v;
        }
    } else {
        for (int ix = 0; ix < m; ++ix)
            for (int iy = 0; iy < m; ++iy) {
                double x = grid.coordinate(0, ix), y = grid.coordinate(1, iy);
                double v = 0.0;
                for (int j = 0; j < b.size(); ++j) v += f.coef[j] * b.eigenfunction(j, x, y);
                out[ix * m + iy] = v;
            }
    }
    return out;
}

/// Analysis: point samples back to coefficients by sine quadrature;
/// exact for bandlimited data on this grid.
inline SpectralField from_samples(const std::vector<double>& samples, const SpectralBasis& b,
                                  const CollocationGrid& grid) {
    if (static_cast<int>(samples.size()) != grid.total_points())
        throw DomainError("from_samples: sample count does not match grid");
    SpectralField f = SpectralField::zero(b);
    int m = grid.points_per_axis;
    double w = grid.weight();
    if (b.dimension() == 1) {
        for (int j = 0; j < b.size(); ++j) {
            double c = 0.0;
            for (int i = 0; i < m; ++i) c += samples[i] * b.eigenfunction(j, grid.coordinate(0, i));
            f.coef[j] = c * w;
        }
    } else {
        for (int j = 0; j < b.size(); ++j) {
            double c = 0.0;
            for (int ix = 0; ix < m; ++ix)
                for (int iy = 0; iy < m; ++iy)
                    c += samples[ix * m + iy] *
                         b.eigenfunction(j, grid.coordinate(0, ix), grid.coordinate(1, iy));
            f.coef[j] = c * w;
        }
    }
    return f;
}

enum class EmbeddingKind {
    w_to_w,   // W^{sigma,p} -> W^{gamma,q}
    w_to_l,   // W^{sigma,2} -> L^q
    l_to_w,   // L^q -> W^{sigma,2}, sigma <= 0
    hs_to_w,  // H^s -> W^{2s,2}
};

struct EmbeddingParams {
    double sigma = 0.0;
    double gamma = 0.0;
    double p = 2.0;
    double q = 2.0;
    double n_dim = 1.0;
    double s = 0.0;
};

struct EmbeddingReport {
    bool pass;
    std::vector<std::string> violations;
};

/// Checks the arithmetic conditions of the standard Sobolev embeddings;
/// pure inequality evaluation, nothing is constructed.
inline EmbeddingReport check_embedding(EmbeddingKind kind, const EmbeddingParams& e) {
    EmbeddingReport r{true, {}};
    auto fail = [&](const std::string& msg) {
        r.pass = false;
        r.violations.push_back(msg);
    };
    const double N = e.n_dim;
    const double eps = 1e-12;  // the chains are often used at exact equality
    switch (kind) {
        case EmbeddingKind::w_to_w:
            if (!(e.p >= 1.0)) fail("p >= 1");
            if (!(e.q >= 1.0)) fail("q >= 1");
            if (!(0.0 <= e.gamma && e.gamma <= e.sigma)) fail("0 <= gamma <= sigma");
            if (!(e.sigma - e.gamma >= N / e.p - N / e.q - eps))
                fail("sigma - gamma >= N/p - N/q");
            break;
        case EmbeddingKind::w_to_l:
            if (!(0.0 <= e.sigma && e.sigma < N / 2.0)) fail("0 <= sigma < N/2");
            if (!(1.0 <= e.q && e.q <= 2.0 * N / (N - 2.0 * e.sigma) + eps))
                fail("1 <= q <= 2N/(N - 2 sigma)");
            break;
        case EmbeddingKind::l_to_w:
            if (!(-N / 2.0 < e.sigma && e.sigma <= 0.0)) fail("-N/2 < sigma <= 0");
            if (!(e.q >= 2.0 * N / (N - 2.0 * e.sigma) - eps)) fail("q >= 2N/(N - 2 sigma)");
            break;
        case EmbeddingKind::hs_to_w:
            if (!(e.s >= 0.0)) fail("s >= 0");
            break;
    }
    return r;
}

}  // namespace fracterm
