#pragma once

#include "mfgs/grid.hpp"

#include <vector>

namespace mfgs {

// Independent ground-state solvers for -v'' + beta v = C v^p (1D) and
// -Lap v + beta v = C v^p (2D), the scalar reductions reached from the
// quadratic-Hamiltonian system through m = v^2. Everything here is
// deliberately disjoint from the HJB/FP fixed-point path; only the grid
// module is shared.

/// Canonical 1D profile phi: -phi'' + phi = phi^p, phi'(0) = 0, phi > 0,
/// phi(x) -> 0, computed by bisection shooting on phi(0) with fixed-step RK4.
struct ShootingProfile {
    double amplitude = 0.0;   // phi(0)
    double p = 0.0;
    double mass = 0.0;        // integral phi^2 over the line
    double step = 0.0;
    std::vector<double> values; // phi at x = k*step, k >= 0

    /// phi(|x|), exponential-tail extension past the stored range.
    double operator()(double x) const;
};

ShootingProfile shoot_ground_state_1d(double p, double ode_step = 1e-4);

/// Positive even ground state of -v'' + beta v = C v^p sampled at the grid's
/// cell centers, via the exact rescaling v(x) = (beta/C)^(1/(p-1)) phi(sqrt(beta) x).
Field nls_ground_state_1d(const Domain& domain, double beta, double c, double p,
                          const ShootingProfile& phi);

/// beta matching integral v^2 = mass (1D). Throws ValidationError at the
/// mass-critical exponent p = 5 where the mass is beta-independent.
double nls_beta_from_mass_1d(double mass, double c, double p,
                             const ShootingProfile& phi);

struct GradientFlowResult {
    Field v;
    double residual = 0.0; // sup |(-Lap v + beta v - C v^p)| / max v^p scale
    int iterations = 0;
    bool converged = false;
};

/// 2D ground state by gradient flow with Nehari normalization: a plain
/// mass-normalized flow collapses in the mass-supercritical regime, so each
/// implicit diffusion step is followed by the rescaling onto
/// integral |grad v|^2 + beta v^2 = C integral v^(p+1).
GradientFlowResult nls_ground_state_2d(const Domain& domain, double beta, double c,
                                       double p, double tol = 1e-10,
                                       int max_iters = 4000);

} // namespace mfgs
