#pragma once

#include "mfgs/functionals.hpp"
#include "mfgs/grid.hpp"
#include "mfgs/hamiltonian.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace mfgs {

struct SolverConfig {
    double damping = 0.5;              // theta in the m update; halved on oscillation
    double hjb_pseudo_time_step = 1.0; // initial tau for the HJB marching
    double fixed_point_tol = 1e-10;    // sup-norm tolerance on the m update
    double multiplier_tol = 1e-10;     // |lambda| tolerance for the mu iteration
    int max_outer_iters = 250;
    int hjb_max_steps = 600;           // pseudo-time steps per HJB solve
    std::vector<double> delta_schedule = {0.5, 0.1, 0.0};
    bool recenter = true;

    void validate() const;
};

/// Converged (u, m, multiplier) triple with the derived drift w = -m grad H(grad u).
/// In L1plusAlpha mode the multiplier is mu (and ||m||_{1+alpha} = 1); in L1
/// mode it is lambda (and integral m = mass).
struct SolutionTriple {
    Field u;
    Field m;
    VectorField w;
    double multiplier = 0.0;
    double lambda_residual = 0.0;   // |lambda| of the last ergodic solve
    double alpha = 0.0;
    HamiltonianSpec hamiltonian;
    MassMode mode = MassMode::L1PlusAlpha;
    double tail_mass = 0.0;         // outer two-layer mass fraction at exit
    double energy_consistency = 0.0; // |mu - E_delta(m,w)| / |mu| at exit

    FlowPair pair() const { return FlowPair{m, w}; }
};

/// Recompute w = -m grad H(grad u) on the triple's grid.
VectorField derived_drift(const Field& u, const Field& m, const HamiltonianSpec& ham);

struct HjbResult {
    Field u;         // normalized so u(center cell) = 0
    double lambda;   // ergodic constant
    int steps;
    double residual; // sup norm of -Lap u + H(grad u) + lambda - rhs
};

/// Ergodic Hamilton-Jacobi solve: -Lap_h u + H(grad_h u) + lambda = rhs.
/// Damped semi-implicit pseudo-time marching
///     u <- u + tau (Lap_h u - H(grad_h u) + rhs - lambda_k),
/// lambda_k the running spatial mean of (rhs - H(grad_h u)); the diffusion and
/// the frozen-coefficient drift linearization are treated implicitly so tau can
/// grow (Newton-like) once the residual contracts. The converged field solves
/// the centered second-order discrete equation regardless of path.
/// Throws SolverError on non-convergence (carrying the last residual) and a
/// step-size error on detected blow-up.
HjbResult solve_hjb_ergodic(const Field& rhs, const HamiltonianSpec& ham,
                            const SolverConfig& config,
                            const Field* warm_start = nullptr);

/// Stationary Fokker-Planck solve: m >= 0 in the kernel of the adjoint of
/// Lap - grad H(grad u).grad, discretized with exponentially fitted
/// (Scharfetter-Gummel) face fluxes; returned with integral m = 1.
/// The M-matrix structure guarantees positivity; entries below
/// -1e-14 * max(m) raise a scheme-violation SolverError.
Field solve_fp_stationary(const Field& u, const HamiltonianSpec& ham);

struct IterationRecord {
    int iter;
    double delta;
    double mu;
    double lambda_residual;
    double m_change;
    double energy;
};

struct StageRecord {
    double delta;
    double e_delta;       // converged multiplier = stage energy
    int outer_iterations;
    double tail_mass;
};

struct SolveLog {
    std::vector<IterationRecord> iterations;
    std::vector<StageRecord> stages;
    bool oscillation_detected = false;
    bool boundary_mass_warning = false; // tail fraction > 1e-6
    bool domain_small_diagnostic = false; // tail fraction > 1e-8
};

void write_iteration_csv(const std::string& path, const SolveLog& log);

/// One damped HJB/FP fixed point at fixed delta > 0 (the delta-regularized
/// auxiliary system). Normalization ||m||_{1+alpha} = 1.
SolutionTriple solve_auxiliary_delta(const ProblemSpec& problem,
                                     const SolverConfig& config,
                                     const SolutionTriple* warm_start = nullptr,
                                     SolveLog* log = nullptr);

/// Warm-started sweep down config.delta_schedule, ending at the potential-free
/// system; the final multiplier is the ground energy e0. The optional observer
/// sees every converged stage (index, delta, triple).
using StageObserver = std::function<void(int, double, const SolutionTriple&)>;

SolutionTriple continue_delta_to_zero(const ProblemSpec& problem,
                                      const SolverConfig& config,
                                      SolveLog* log = nullptr,
                                      const StageObserver& on_stage = {});

} // namespace mfgs
