#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fracterm/solver.hpp"

using namespace fracterm;

namespace {

double ml_e1(double alpha, double z) { return ml(MLParams{alpha, 1.0}, z); }

}  // namespace

TEST_CASE("linear terminal problem solves in one iteration") {
    auto basis = SpectralBasis::dirichlet_laplacian_1d(pi, 4);
    TerminalSetup setup(1.5, 2.0, basis);
    TimeGrid grid(2.0, 32, 2.0);
    ProblemSpec ps{&setup, {&basis, {1.0, -0.4, 0.2, 0.05}}, NonlinearitySpec::zero_source(), {}};

    auto traj = solve_tvp_picard(ps, grid, 1e-12, 50);
    REQUIRE(traj.iterations == 1);
    REQUIRE(traj.states.size() == 33);
    // every node is exactly the backward propagator applied to f
    for (int n = 0; n <= 32; ++n) {
        auto expect = apply_B(setup, grid.nodes[n], ps.f);
        for (int j = 0; j < basis.size(); ++j)
            REQUIRE(traj.states[n].coef[j] == Catch::Approx(expect.coef[j]).epsilon(1e-15));
    }
    // terminal consistency is exact
    for (int j = 0; j < basis.size(); ++j) REQUIRE(traj.states[32].coef[j] == ps.f.coef[j]);
    // u(0) against the oracle quotient
    double t_pow = std::pow(2.0, 1.5);
    for (int j = 0; j < basis.size(); ++j)
        REQUIRE(traj.states[0].coef[j] ==
                Catch::Approx(ps.f.coef[j] / ml_e1(1.5, -basis.lambda(j) * t_pow)).epsilon(1e-12));
}

TEST_CASE("classical wave cross-check") {
    auto basis = SpectralBasis::dirichlet_laplacian_1d(pi, 4);
    TerminalSetup setup(2.0, 2.0, basis);
    TimeGrid grid(2.0, 16, 2.0);
    ProblemSpec ps{&setup, {&basis, {0.7, -0.3, 0.1, 0.9}}, NonlinearitySpec::zero_source(), {}};
    auto traj = solve_tvp_picard(ps, grid, 1e-12, 10);
    for (int n = 0; n <= 16; ++n)
        for (int j = 0; j < basis.size(); ++j) {
            double root = std::sqrt(basis.lambda(j));
            double expect =
                std::cos(root * grid.nodes[n]) / std::cos(root * 2.0) * ps.f.coef[j];
            REQUIRE(traj.states[n].coef[j] == Catch::Approx(expect).margin(1e-9));
        }
}

TEST_CASE("lipschitz source converges to the shifted-spectrum solution") {
    auto basis = SpectralBasis::from_spectrum({1.0, 3.0, 6.0});
    double alpha = 1.5, t_final = 1.0, l1 = 0.05;
    TerminalSetup setup(alpha, t_final, basis);
    TimeGrid grid(t_final, 256, 2.0);
    ProblemSpec ps{&setup, {&basis, {1.0, 0.5, -0.7}}, NonlinearitySpec::lipschitz(l1), {}};

    auto traj = solve_tvp_picard(ps, grid, 1e-11, 60);
    REQUIRE(traj.iterations >= 3);
    // G = l1 u is the same equation with every eigenvalue shifted by -l1
    for (int n : {32, 128, 256}) {
        double t = grid.nodes[n];
        for (int j = 0; j < basis.size(); ++j) {
            double shifted = basis.lambda(j) - l1;
            double expect = ps.f.coef[j] * ml_e1(alpha, -shifted * std::pow(t, alpha)) /
                            ml_e1(alpha, -shifted * std::pow(t_final, alpha));
            REQUIRE(traj.states[n].coef[j] == Catch::Approx(expect).epsilon(5e-3));
        }
    }
    // geometric decay: ratios settle and stay below one
    REQUIRE(traj.ratios.size() >= 2);
    for (std::size_t i = 1; i < traj.ratios.size(); ++i) REQUIRE(traj.ratios[i] < 1.0);
    REQUIRE(traj.contraction_factor < 1.0);
    // applying one more map application moves the iterate by at most ~tol
    REQUIRE(traj.diff_norms.back() <= 1e-11);
}

TEST_CASE("critical iteration contracts for a small source") {
    auto basis = SpectralBasis::dirichlet_laplacian_1d(pi, 6);
    double alpha = 1.5, t_final = 1.0;
    TerminalSetup setup(alpha, t_final, basis);
    TimeGrid grid(t_final, 128, 2.0);
    ProblemSpec ps{&setup,
                   SpectralField::single_mode(basis, 0, 0.5),
                   NonlinearitySpec::ginzburg_landau(1.0, 0.01, 0.0),
                   {}};
    auto traj = solve_tvp_contraction(ps, grid, 1e-11, 60);
    REQUIRE(traj.iterations >= 2);
    REQUIRE(traj.contraction_factor <= 0.75);  // (2+s)/(2+2s) at s=1
    REQUIRE_FALSE(traj.radius_exceeded);

    // zero amplitude reduces to the linear case
    ps.nonlinearity = NonlinearitySpec::ginzburg_landau(1.0, 0.0, 0.0);
    auto lin = solve_tvp_contraction(ps, grid, 1e-11, 10);
    REQUIRE(lin.iterations == 1);

    // a tiny declared radius trips the warning diagnostic
    ps.nonlinearity = NonlinearitySpec::ginzburg_landau(1.0, 0.01, 0.0);
    auto tight = solve_tvp_contraction(ps, grid, 1e-11, 60, 1e-6);
    REQUIRE(tight.radius_exceeded);
}

TEST_CASE("forward march reproduces the relaxation modes") {
    auto basis = SpectralBasis::dirichlet_laplacian_1d(pi, 3);
    double alpha = 1.5, t_final = 2.0;
    TerminalSetup setup(alpha, t_final, basis);
    TimeGrid grid(t_final, 64, 2.0);
    auto u0 = SpectralField::single_mode(basis, 0, 1.0);
    auto traj = solve_ivp_forward(setup, grid, u0, NonlinearitySpec::zero_source());
    for (int n = 0; n <= 64; ++n) {
        double expect = ml_e1(alpha, -basis.lambda(0) * std::pow(grid.nodes[n], alpha));
        REQUIRE(traj.states[n].coef[0] == Catch::Approx(expect).epsilon(1e-12));
        REQUIRE(traj.states[n].coef[1] == 0.0);
    }

    TerminalSetup wave(2.0, t_final, basis);
    auto wt = solve_ivp_forward(wave, grid, u0, NonlinearitySpec::zero_source());
    for (int n = 0; n <= 64; ++n)
        REQUIRE(wt.states[n].coef[0] == Catch::Approx(std::cos(grid.nodes[n])).margin(1e-12));

    auto zt = solve_ivp_forward(setup, grid, SpectralField::zero(basis),
                                NonlinearitySpec::zero_source());
    for (auto& st : zt.states)
        for (double c : st.coef) REQUIRE(c == 0.0);
}

TEST_CASE("initial reconstruction and round trip") {
    auto basis = SpectralBasis::dirichlet_laplacian_1d(pi, 4);
    double alpha = 1.5, t_final = 1.0;
    TerminalSetup setup(alpha, t_final, basis);
    TimeGrid grid(t_final, 256, 2.0);
    ConvolutionPlan plan(setup, grid);
    ProblemSpec ps{&setup, {&basis, {0.8, -0.2, 0.1, 0.0}}, NonlinearitySpec::lipschitz(0.02), {}};

    auto traj = solve_tvp_picard(ps, grid, 1e-11, 60);
    auto u0 = reconstruct_initial(ps, plan, traj);
    // node 0 of the trajectory is the same reconstruction up to the last update
    for (int j = 0; j < basis.size(); ++j)
        REQUIRE(u0.coef[j] == Catch::Approx(traj.states[0].coef[j]).margin(1e-9));

    // marching forward from u(0) lands back on f
    auto fwd = solve_ivp_forward(setup, grid, u0, ps.nonlinearity);
    SpectralField diff = SpectralField::zero(basis);
    for (int j = 0; j < basis.size(); ++j)
        diff.coef[j] = fwd.states[grid.node_count].coef[j] - ps.f.coef[j];
    REQUIRE(norm_hs(diff, 0.0) / norm_hs(ps.f, 0.0) <= 1e-3);

    // linear case collapses to the quotient formula
    ps.nonlinearity = NonlinearitySpec::zero_source();
    auto lt = solve_tvp_picard(ps, grid, 1e-12, 10);
    auto lu0 = reconstruct_initial(ps, plan, lt);
    for (int j = 0; j < basis.size(); ++j)
        REQUIRE(lu0.coef[j] ==
                Catch::Approx(ps.f.coef[j] / setup.denominator(j)).epsilon(1e-14));

    ps.f = SpectralField::zero(basis);
    auto zt = solve_tvp_picard(ps, grid, 1e-12, 10);
    for (double c : reconstruct_initial(ps, plan, zt).coef) REQUIRE(c == 0.0);
}

TEST_CASE("derivative assemblies") {
    auto basis = SpectralBasis::from_spectrum({2.0});
    double alpha = 1.6, t_final = 1.0;
    TerminalSetup setup(alpha, t_final, basis);
    TimeGrid grid(t_final, 64, 2.0);
    ConvolutionPlan plan(setup, grid);
    ProblemSpec ps{&setup, {&basis, {1.0}}, NonlinearitySpec::zero_source(), {}};
    auto traj = solve_tvp_picard(ps, grid, 1e-12, 10);

    auto d1 = reconstruct_derivatives(ps, plan, traj, DerivOrder::first);
    // finite differences of the closed-form trajectory
    double h = 1e-6;
    for (int n : {16, 32, 48}) {
        double t = grid.nodes[n];
        auto hi = apply_B(setup, t + h, ps.f), lo = apply_B(setup, t - h, ps.f);
        double fd = (hi.coef[0] - lo.coef[0]) / (2.0 * h);
        REQUIRE(d1[n].coef[0] == Catch::Approx(fd).epsilon(1e-4));
    }

    // alpha-order: the assembly satisfies the equation itself
    auto da = reconstruct_derivatives(ps, plan, traj, DerivOrder::alpha);
    auto res = equation_residual(ps, traj, da);
    for (int n = 0; n <= grid.node_count; ++n) REQUIRE(res[n] <= 1e-8);

    // classical wave first derivative
    TerminalSetup wave(2.0, t_final, basis);
    ConvolutionPlan wplan(wave, grid);
    ProblemSpec wps{&wave, {&basis, {1.0}}, NonlinearitySpec::zero_source(), {}};
    auto wtraj = solve_tvp_picard(wps, grid, 1e-12, 10);
    auto wd = reconstruct_derivatives(wps, wplan, wtraj, DerivOrder::first);
    double root = std::sqrt(2.0);
    for (int n : {16, 48}) {
        double expect = -root * std::sin(root * grid.nodes[n]) / std::cos(root * t_final);
        REQUIRE(wd[n].coef[0] == Catch::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("residual flags an unconverged iterate") {
    auto basis = SpectralBasis::from_spectrum({1.0, 2.0});
    TerminalSetup setup(1.5, 1.0, basis);
    TimeGrid grid(1.0, 64, 2.0);
    ConvolutionPlan plan(setup, grid);
    ProblemSpec ps{&setup, {&basis, {1.0, 0.5}}, NonlinearitySpec::lipschitz(0.05), {}};

    // a sloppy tolerance stops after the first sweep; the residual sees it
    auto rough = solve_tvp_picard(ps, grid, 100.0, 5);
    REQUIRE(rough.iterations == 1);
    auto da = reconstruct_derivatives(ps, plan, rough, DerivOrder::alpha);
    auto res = equation_residual(ps, rough, da);
    double worst = 0.0;
    for (double r : res) worst = std::max(worst, r);
    REQUIRE(worst > 1e-6);

    // the converged run satisfies the equation far more tightly
    auto good = solve_tvp_picard(ps, grid, 1e-11, 60);
    auto dg = reconstruct_derivatives(ps, plan, good, DerivOrder::alpha);
    auto rg = equation_residual(ps, good, dg);
    double worst_good = 0.0;
    for (double r : rg) worst_good = std::max(worst_good, r);
    REQUIRE(worst_good < 1e-9);
    REQUIRE(worst_good < worst / 1e3);
}

TEST_CASE("solver input validation") {
    auto basis = SpectralBasis::dirichlet_laplacian_1d(pi, 3);
    auto other = SpectralBasis::dirichlet_laplacian_1d(pi, 3);
    TerminalSetup setup(1.5, 1.0, basis);
    TimeGrid grid(1.0, 16, 2.0);
    ProblemSpec ps{&setup, SpectralField::zero(basis), NonlinearitySpec::zero_source(), {}};

    ps.regularity.theta = 0.2;  // below (alpha-1)/alpha = 1/3
    REQUIRE_THROWS_AS(solve_tvp_picard(ps, grid, 1e-10, 10), DomainError);
    ps.regularity.theta = 0.8;

    ps.nonlinearity = NonlinearitySpec::ginzburg_landau(1.0, 0.1, 0.0);
    REQUIRE_THROWS_AS(solve_tvp_picard(ps, grid, 1e-10, 10), DomainError);
    REQUIRE_THROWS_AS(
        [&] {
            ps.regularity.vartheta = 0.5;  // below mu = 0.8
            return solve_tvp_contraction(ps, grid, 1e-10, 10);
        }(),
        DomainError);
    ps.regularity.vartheta = 0.9;
    ps.nonlinearity = NonlinearitySpec::lipschitz(0.1);
    REQUIRE_THROWS_AS(solve_tvp_contraction(ps, grid, 1e-10, 10), DomainError);

    ps.f = SpectralField::zero(other);
    ps.nonlinearity = NonlinearitySpec::zero_source();
    REQUIRE_THROWS_AS(solve_tvp_picard(ps, grid, 1e-10, 10), DomainError);
    REQUIRE_THROWS_AS(solve_ivp_forward(setup, grid, SpectralField::zero(other),
                                        NonlinearitySpec::zero_source()),
                      DomainError);

    // a strongly expansive source exhausts max_iter
    ps.f = SpectralField::single_mode(basis, 0, 1.0);
    ps.nonlinearity = NonlinearitySpec::lipschitz(50.0);
    REQUIRE_THROWS_AS(solve_tvp_picard(ps, grid, 1e-12, 8), NonConvergence);
}
