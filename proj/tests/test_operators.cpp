#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fracterm/operators.hpp"

using namespace fracterm;

namespace {

// adaptive Simpson for smooth integrands, used as the quadrature oracle
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, tol / 2, depth - 1) +
           simpson(f, m, b, fm, frm, fb, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-11) {
    double m = 0.5 * (a + b);
    return simpson(f, a, b, f(a), f(m), f(b), tol, 40);
}

}  // namespace

TEST_CASE("setup validation and admissibility guard") {
    auto basis = SpectralBasis::dirichlet_laplacian_1d(pi, 4);
    REQUIRE_THROWS_AS(TerminalSetup(1.0, 1.0, basis), DomainError);
    REQUIRE_THROWS_AS(TerminalSetup(2.1, 1.0, basis), DomainError);
    REQUIRE_THROWS_AS(TerminalSetup(1.5, 0.0, basis), DomainError);
    REQUIRE_THROWS_AS(TerminalSetup(1.5, 1.0, basis, 0.0), DomainError);

    try {
        TerminalSetup(1.5, 1.0, basis, 1.0);  // every |E| < 1, so mode 1 trips first
        FAIL("expected TerminalTimeInadmissible");
    } catch (const TerminalTimeInadmissible& e) {
        REQUIRE(e.mode_index == 1);
        REQUIRE(std::abs(e.denominator) <= 1.0);
    }

    TerminalSetup ok(1.5, 1.0, basis);
    REQUIRE(ok.worst_amplification() >= 1.0);
}

TEST_CASE("backward propagator values") {
    auto basis = SpectralBasis::from_spectrum({1.0});
    TerminalSetup setup(1.5, 1.0, basis);
    SpectralField f = SpectralField::single_mode(basis, 0);

    // t = T is the identity, exactly
    REQUIRE(apply_B(setup, 1.0, f).coef[0] == 1.0);
    // t = 0 amplifies by 1/E_{1.5,1}(-1)
    REQUIRE(apply_B(setup, 0.0, f).coef[0] == Catch::Approx(2.52124549375718).epsilon(1e-12));
    // interior node against the reference ratio
    REQUIRE(apply_B(setup, 0.5, f).coef[0] == Catch::Approx(1.901142148828608).epsilon(1e-11));

    auto basis2 = SpectralBasis::from_spectrum({9.8696044010893586});
    TerminalSetup s2(1.3, 1.0, basis2);
    SpectralField g = SpectralField::single_mode(basis2, 0);
    REQUIRE(apply_B(s2, 0.25, g).coef[0] == Catch::Approx(-3.4342286530671671).epsilon(1e-11));
    REQUIRE(s2.denominator(0) == Catch::Approx(-0.042199844227856183).epsilon(1e-11));

    REQUIRE_THROWS_AS(apply_B(setup, -0.1, f), DomainError);
    REQUIRE_THROWS_AS(apply_B(setup, 1.1, f), DomainError);
    for (double c : apply_B(setup, 0.3, SpectralField::zero(basis)).coef) REQUIRE(c == 0.0);
}

TEST_CASE("source-response operator values") {
    auto basis = SpectralBasis::from_spectrum({1.0, 4.0});
    TerminalSetup wave(2.0, 1.0, basis);
    SpectralField f{&basis, {1.0, 0.0}};
    // t E_{2,2}(-t^2) = sin t
    REQUIRE(apply_P(wave, pi / 2, f).coef[0] == Catch::Approx(1.0).epsilon(1e-12));

    TerminalSetup setup(1.5, 1.0, basis);
    SpectralField g{&basis, {0.0, 1.0}};
    REQUIRE(apply_P(setup, 0.5, g).coef[1] ==
            Catch::Approx(0.40421740867764793).epsilon(1e-11));
    // leading term as t -> 0: multiplier / t^{alpha-1} -> 1/Gamma(alpha)
    double t = 1e-8;
    REQUIRE(apply_P(setup, t, f).coef[0] / std::pow(t, 0.5) ==
            Catch::Approx(reciprocal_gamma(1.5)).epsilon(1e-6));
    REQUIRE_THROWS_AS(apply_P(setup, 0.0, f), DomainError);
}

TEST_CASE("forward propagator values") {
    auto basis = SpectralBasis::from_spectrum({1.0});
    SpectralField f = SpectralField::single_mode(basis, 0);
    TerminalSetup wave(2.0, 4.0, basis);
    REQUIRE(apply_B0(wave, 0.0, f).coef[0] == 1.0);
    REQUIRE(apply_B0(wave, pi, f).coef[0] == Catch::Approx(-1.0).epsilon(1e-12));

    TerminalSetup setup(1.5, 1.0, basis);
    REQUIRE(apply_B0(setup, 1.0, f).coef[0] ==
            Catch::Approx(ml(MLParams{1.5, 1.0}, -1.0)).epsilon(1e-12));
}

TEST_CASE("derivative operator multipliers") {
    auto basis = SpectralBasis::from_spectrum({1.0, 2.5});
    TerminalSetup wave(2.0, 1.0, basis);
    SpectralField f{&basis, {1.0, 0.0}};
    // d2 multiplier at alpha=2: E_{2,1}(-t^2) = cos t
    REQUIRE(apply_D(wave, DerivOp::d2, pi, f).coef[0] == Catch::Approx(-1.0).epsilon(1e-12));

    TerminalSetup setup(1.4, 2.0, basis);
    SpectralField g{&basis, {0.7, -1.3}};
    double t = 0.6;
    auto d4 = apply_D(setup, DerivOp::d4, t, g);
    auto p = apply_P(setup, t, g);
    auto d3 = apply_D(setup, DerivOp::d3, t, g);
    auto b = apply_B(setup, t, g);
    auto d1 = apply_D(setup, DerivOp::d1, t, g);
    for (int j = 0; j < basis.size(); ++j) {
        double lam = basis.lambda(j);
        REQUIRE(d4.coef[j] == Catch::Approx(-lam * p.coef[j]).epsilon(1e-15));
        REQUIRE(d3.coef[j] == Catch::Approx(-lam * b.coef[j]).epsilon(1e-14));
        REQUIRE(d1.coef[j] ==
                Catch::Approx(-lam * p.coef[j] / setup.denominator(j)).epsilon(1e-14));
    }
    // d1 at t=T directly against the evaluator
    double lam = basis.lambda(1);
    double expect = -lam * std::pow(2.0, 0.4) * ml(MLParams{1.4, 1.4}, -lam * std::pow(2.0, 1.4)) /
                    ml(MLParams{1.4, 1.0}, -lam * std::pow(2.0, 1.4));
    SpectralField one = SpectralField::single_mode(basis, 1);
    REQUIRE(apply_D(setup, DerivOp::d1, 2.0, one).coef[1] == Catch::Approx(expect).epsilon(1e-10));

    REQUIRE_THROWS_AS(apply_D(setup, DerivOp::d2, 0.0, g), DomainError);
}

TEST_CASE("linearity and mode decoupling") {
    auto basis = SpectralBasis::dirichlet_laplacian_1d(pi, 8);
    TerminalSetup setup(1.6, 2.0, basis);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    SpectralField u = SpectralField::zero(basis), v = SpectralField::zero(basis);
    for (int j = 0; j < basis.size(); ++j) {
        u.coef[j] = uni(rng);
        v.coef[j] = uni(rng);
    }
    double a = 0.37, c = -2.1;
    SpectralField w = SpectralField::zero(basis);
    for (int j = 0; j < basis.size(); ++j) w.coef[j] = a * u.coef[j] + c * v.coef[j];

    auto check_linear = [&](auto&& op) {
        auto lhs = op(w);
        auto ou = op(u), ov = op(v);
        for (int j = 0; j < basis.size(); ++j)
            REQUIRE(lhs.coef[j] ==
                    Catch::Approx(a * ou.coef[j] + c * ov.coef[j]).margin(1e-12));
    };
    double t = 0.8;
    check_linear([&](const SpectralField& x) { return apply_B(setup, t, x); });
    check_linear([&](const SpectralField& x) { return apply_P(setup, t, x); });
    check_linear([&](const SpectralField& x) { return apply_B0(setup, t, x); });
    check_linear([&](const SpectralField& x) { return apply_D(setup, DerivOp::d2, t, x); });

    // operators never mix modes
    auto single = apply_B(setup, 0.3, SpectralField::single_mode(basis, 4));
    for (int j = 0; j < basis.size(); ++j)
        if (j != 4) REQUIRE(single.coef[j] == 0.0);
}

TEST_CASE("alpha=2 multipliers match the classical wave solution") {
    auto basis = SpectralBasis::dirichlet_laplacian_1d(pi, 4);  // lambda = j^2
    TerminalSetup wave(2.0, 1.0, basis);
    for (int j = 0; j < basis.size(); ++j) {
        double w = std::sqrt(basis.lambda(j));
        for (double t : {0.1, 0.4, 0.75, 1.0}) {
            SpectralField f = SpectralField::single_mode(basis, j);
            REQUIRE(apply_B(wave, t, f).coef[j] ==
                    Catch::Approx(std::cos(w * t) / std::cos(w * 1.0)).epsilon(1e-9));
            if (t > 0.0)
                REQUIRE(apply_P(wave, t, f).coef[j] ==
                        Catch::Approx(std::sin(w * t) / w).margin(1e-9));
        }
    }
}

TEST_CASE("antiderivative identity for the P kernel") {
    for (auto [alpha, lam] : {std::pair{1.5, 4.0}, std::pair{1.2, 30.0}, std::pair{1.9, 1.0}}) {
        MLEvaluator ea(MLParams{alpha, alpha});
        MLEvaluator e1(MLParams{alpha, 1.0});
        double t = 2.0, a = 0.3, b = 1.4;
        double numeric = integrate(
            [&](double r) {
                return std::pow(t - r, alpha - 1.0) *
                       ea.evaluate(-lam * std::pow(t - r, alpha)).value;
            },
            a, b);
        double closed = (e1.evaluate(-lam * std::pow(t - b, alpha)).value -
                         e1.evaluate(-lam * std::pow(t - a, alpha)).value) /
                        lam;
        REQUIRE(numeric == Catch::Approx(closed).margin(1e-8));
    }
}

TEST_CASE("backward ratio bound of the fitted envelope") {
    auto basis = SpectralBasis::dirichlet_laplacian_1d(pi, 32);
    double alpha = 1.5, T = 2.0;
    TerminalSetup setup(alpha, T, basis);
    auto fitted = fit_bound_constants(alpha, 1.0,
                                      basis.lambda(basis.size() - 1) * std::pow(T, alpha));
    std::vector<double> t_grid;
    for (int i = 0; i <= 49; ++i) t_grid.push_back(1e-4 * std::pow(T / 1e-4, i / 49.0));
    auto rep = ratio_bound_check(setup, 0.9, t_grid, fitted);
    REQUIRE(rep.violations == 0);
    REQUIRE(rep.max_ratio <= 1.0);
    REQUIRE(rep.max_ratio > 0.0);

    // at t=T the left side is 1 and the bound holds trivially
    auto at_T = ratio_bound_check(setup, 0.9, {T}, fitted);
    REQUIRE(at_T.violations == 0);

    REQUIRE_THROWS_AS(ratio_bound_check(setup, 0.0, t_grid, fitted), DomainError);
    REQUIRE_THROWS_AS(ratio_bound_check(setup, 0.5, {-1.0}, fitted), DomainError);
}
