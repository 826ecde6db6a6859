#include <doctest.h>

#include "mfgs/checkpoint.hpp"
#include "mfgs/errors.hpp"
#include "mfgs/field_io.hpp"
#include "mfgs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

using namespace mfgs;

namespace {

HamiltonianSpec quad() { return {HamiltonianKind::IsotropicPower, 2.0, {1.0}}; }

SolverConfig tight() {
    SolverConfig c;
    c.fixed_point_tol = 1e-10;
    c.multiplier_tol = 1e-10;
    c.damping = 0.7;
    c.delta_schedule = {0.5, 0.1, 0.0};
    return c;
}

ProblemSpec small_problem(double alpha, int n, double r) {
    ProblemSpec p;
    p.hamiltonian = quad();
    p.alpha = alpha;
    p.potential = {PotentialKind::Power, 1.0, 2.0};
    p.delta = 0.5;
    p.domain = Domain{1, r, n, Boundary::NoFlux};
    return p;
}

} // namespace

TEST_CASE("solve_hjb_ergodic: constant rhs is exact") {
    Domain d{1, 4.0, 64, Boundary::NoFlux};
    Field rhs(d, 2.5);
    HjbResult res = solve_hjb_ergodic(rhs, quad(), tight());
    CHECK(res.lambda == doctest::Approx(2.5).epsilon(1e-12));
    for (double v : res.u.values) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("solve_hjb_ergodic: lambda is continuous in small perturbations") {
    Domain d{1, 4.0, 128, Boundary::NoFlux};
    const double c = 1.7;
    double lam_prev = 0.0;
    double eps = 0.4;
    // lambda(eps) -> c as the mean-zero perturbation shrinks
    for (int k = 0; k < 4; ++k, eps *= 0.5) {
        Field rhs(d, c);
        for (int i = 0; i < d.points_per_axis; ++i)
            rhs[i] += eps * std::cos(3.14159265358979 * d.cell_center(i) / 4.0);
        HjbResult res = solve_hjb_ergodic(rhs, quad(), tight());
        const double gap = std::abs(res.lambda - c);
        if (k > 0) CHECK(gap < std::abs(lam_prev - c));
        lam_prev = res.lambda;
    }
    CHECK(std::abs(lam_prev - c) < 0.02);
}

TEST_CASE("solve_hjb_ergodic: manufactured 1D Hopf-Cole solution, O(h^2)") {
    // u* = a cos(pi x / R) is wall-compatible (u*' = 0 at the walls);
    // rhs = -u*'' + u*'^2 has ergodic constant 0 by construction
    const double pi = 3.14159265358979323846;
    const double a = 0.3, R = 4.0;
    double errs[2];
    int k = 0;
    for (int n : {128, 256}) {
        Domain d{1, R, n, Boundary::NoFlux};
        Field rhs(d);
        Field ustar(d);
        for (int i = 0; i < n; ++i) {
            const double x = d.cell_center(i);
            const double up = -a * pi / R * std::sin(pi * x / R);
            const double upp = -a * pi * pi / (R * R) * std::cos(pi * x / R);
            ustar[i] = a * std::cos(pi * x / R);
            rhs[i] = -upp + up * up;
        }
        HjbResult res = solve_hjb_ergodic(rhs, quad(), tight());
        const double shift = ustar[d.center_index()];
        double err = 0.0;
        for (int i = 0; i < n; ++i)
            err = std::max(err, std::abs(res.u[i] - (ustar[i] - shift)));
        CHECK(std::abs(res.lambda) < 50.0 * d.spacing() * d.spacing());
        errs[k++] = err;
    }
    CHECK(errs[1] < errs[0] / 3.0); // ~ order 2
}

TEST_CASE("solve_hjb_ergodic: non-convergence carries the residual") {
    Domain d{1, 4.0, 64, Boundary::NoFlux};
    Field rhs(d);
    for (int i = 0; i < 64; ++i) rhs[i] = d.cell_center(i) * d.cell_center(i);
    SolverConfig c = tight();
    c.hjb_max_steps = 1;
    CHECK_THROWS_AS(solve_hjb_ergodic(rhs, quad(), c), SolverError);
}

TEST_CASE("solve_fp_stationary: uniform for constant u, exact unit mass") {
    Domain d{2, 3.0, 24, Boundary::NoFlux};
    Field u(d, 1.0);
    Field m = solve_fp_stationary(u, quad());
    CHECK(integrate(m) == doctest::Approx(1.0).epsilon(1e-13));
    const double expect = 1.0 / (4.0 * d.half_width * d.half_width);
    for (double v : m.values) CHECK(v == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("solve_fp_stationary: 1D Gibbs kernel m ~ e^(-2u) is exact") {
    // gamma = 2, C_H = 1: face drift 2(u_R - u_L)/h makes the zero-flux kernel
    // exactly the discrete Gibbs measure: B(z)/B(-z) = e^(-z) telescopes to
    // m_i ~ exp(-2 u_i), so the match is rounding-level, not O(h^2)
    for (int n : {128, 256}) {
        Domain d{1, 3.0, n, Boundary::NoFlux};
        Field u(d);
        for (int i = 0; i < n; ++i) {
            const double x = d.cell_center(i);
            u[i] = 0.5 * x * x + 0.3 * std::sin(x);
        }
        Field m = solve_fp_stationary(u, quad());
        Field gibbs(d);
        for (int i = 0; i < n; ++i) gibbs[i] = std::exp(-2.0 * u[i]);
        const double z = integrate(gibbs);
        double err = 0.0;
        for (int i = 0; i < n; ++i)
            err = std::max(err, std::abs(m[i] - gibbs[i] / z));
        CHECK(err / max_abs(m) < 1e-12);
        CHECK(*std::min_element(m.values.begin(), m.values.end()) > 0.0);
    }
}

TEST_CASE("solve_auxiliary_delta: contract checks on a small 1D problem") {
    ProblemSpec p = small_problem(3.0, 128, 6.0);
    SolverConfig c = tight();
    SolveLog log;
    SolutionTriple sol = solve_auxiliary_delta(p, c, nullptr, &log);

    CHECK(sol.lambda_residual < c.multiplier_tol);
    CHECK(lp_norm(sol.m, 1.0 + p.alpha) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*std::min_element(sol.m.values.begin(), sol.m.values.end()) > 0.0);
    // mu = E_delta(m, w) identity at the discretization level
    CHECK(sol.energy_consistency < 5e-3);
    CHECK(sol.multiplier > 0.0);

    // cell-wise (gamma-1) H(grad u) = L(-w/m) through the derived drift
    PohozaevResiduals r = pohozaev_residuals(sol, p.alpha);
    CHECK(r.r2_fenchel < 1e-10);

    // iteration log grew and reports the final stage delta
    CHECK(log.iterations.size() > 3);
    CHECK(log.iterations.back().delta == doctest::Approx(0.5));

    // delta = 0 through the public entry point is a validation error
    ProblemSpec p0 = p;
    p0.delta = 0.0;
    CHECK_THROWS_AS(solve_auxiliary_delta(p0, c), ValidationError);
    // alpha at/above the Sobolev exponent rejected by validation
    ProblemSpec bad = p;
    bad.domain.dim = 2;
    bad.domain.points_per_axis = 24;
    bad.alpha = 5.0;
    bad.hamiltonian.gamma = 3.0; // gamma' = 1.5 < n = 2 -> alpha^* = 3
    CHECK_THROWS_AS(solve_auxiliary_delta(bad, c), ValidationError);
}

TEST_CASE("continue_delta_to_zero: monotone stage energies, e0 > 0, decay") {
    ProblemSpec p = small_problem(3.0, 192, 7.0);
    SolverConfig c = tight();
    SolveLog log;
    SolutionTriple sol = continue_delta_to_zero(p, c, &log);

    REQUIRE(log.stages.size() == 3);
    CHECK(sol.multiplier > 0.0); // e0 > 0 strictly
    for (std::size_t i = 1; i < log.stages.size(); ++i)
        CHECK(log.stages[i].e_delta <= log.stages[i - 1].e_delta + 1e-9);
    for (const auto& st : log.stages)
        CHECK(st.e_delta >= sol.multiplier - 1e-9);
    CHECK(sol.lambda_residual < c.multiplier_tol);

    // exponential tail: log m drops linearly toward the boundary
    const int n = p.domain.points_per_axis;
    const double mid = sol.m[n / 2];
    const double threequarters = sol.m[7 * n / 8];
    CHECK(threequarters < mid * 1e-3);

    // schedule must end at zero
    SolverConfig c2 = c;
    c2.delta_schedule = {0.5, 0.1};
    CHECK_THROWS_AS(continue_delta_to_zero(p, c2, nullptr), ValidationError);
}

TEST_CASE("pipeline determinism: byte-identical checkpoints on rerun") {
    ProblemSpec p = small_problem(2.5, 96, 6.0);
    SolverConfig c = tight();
    const auto dir1 = std::filesystem::temp_directory_path() / "mfg_det1";
    const auto dir2 = std::filesystem::temp_directory_path() / "mfg_det2";
    for (const auto& dir : {dir1, dir2}) {
        SolutionTriple sol = continue_delta_to_zero(p, c);
        save_triple(dir.string(), sol);
    }
    for (const char* f : {"u.fld", "m.fld", "w.fld"})
        CHECK(fnv1a_file((dir1 / f).string()) == fnv1a_file((dir2 / f).string()));
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("checkpoint round trip preserves the triple") {
    ProblemSpec p = small_problem(3.0, 96, 6.0);
    SolutionTriple sol = solve_auxiliary_delta(p, tight());
    const auto dir = std::filesystem::temp_directory_path() / "mfg_ckpt";
    save_triple(dir.string(), sol);
    SolutionTriple back = load_triple(dir.string());
    CHECK(back.multiplier == sol.multiplier);
    CHECK(back.alpha == sol.alpha);
    CHECK(back.mode == sol.mode);
    CHECK(back.hamiltonian.gamma == sol.hamiltonian.gamma);
    for (std::size_t i = 0; i < sol.m.size(); ++i) CHECK(back.m[i] == sol.m[i]);
    std::filesystem::remove_all(dir);
}

TEST_CASE("solver config validation") {
    SolverConfig c;
    c.damping = 0.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = SolverConfig{};
    c.delta_schedule = {0.5, 0.5};
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = SolverConfig{};
    c.delta_schedule = {1.5, 0.0};
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = SolverConfig{};
    CHECK_NOTHROW(c.validate());
}
