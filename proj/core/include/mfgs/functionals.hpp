#pragma once

#include "mfgs/grid.hpp"
#include "mfgs/hamiltonian.hpp"

#include <span>
#include <string>

namespace mfgs {

// ---------------------------------------------------------------------------
// potentials
// ---------------------------------------------------------------------------

enum class PotentialKind { Power, Log, Zero };

std::string to_string(PotentialKind k);
PotentialKind potential_kind_from_string(const std::string& s);

/// Coercive potential catalog: C_V |x|^b, C_V log(1+|x|), or identically zero.
struct PotentialSpec {
    PotentialKind kind = PotentialKind::Power;
    double c_v = 1.0;
    double b = 2.0;

    bool coercive() const { return kind != PotentialKind::Zero; }
    void validate() const;
};

double eval_potential(const PotentialSpec& spec, std::span<const double> x);

/// Potential sampled at cell centers.
Field potential_field(const PotentialSpec& spec, const Domain& domain);

// ---------------------------------------------------------------------------
// problem description
// ---------------------------------------------------------------------------

enum class MassMode { L1PlusAlpha, L1 };

std::string to_string(MassMode m);
MassMode mass_mode_from_string(const std::string& s);

struct ProblemSpec {
    HamiltonianSpec hamiltonian;
    double alpha = 1.0;
    PotentialSpec potential;
    double delta = 0.5;           // weight of the coercive potential term
    MassMode mass_mode = MassMode::L1PlusAlpha;
    double mass = 1.0;            // target L1 mass (L1 mode)
    Domain domain;

    double alpha_star() const { return hamiltonian.gamma_prime() / domain.dim; }
    /// Sobolev-type upper exponent; +infinity when dim <= gamma'.
    double alpha_upper() const;

    /// Validates every member plus alpha in (0, alpha_upper) and delta in [0,1).
    void validate() const;
};

// ---------------------------------------------------------------------------
// energies and identity functionals
// ---------------------------------------------------------------------------

/// integral of m L(-w/m); +infinity sentinel when any cell is infeasible.
/// Cells with m below 1e-14 * max(m) contribute 0 when |w| <= 1e-14 * max|w|
/// there, +infinity otherwise.
KineticValue kinetic_integral(const FlowPair& pair, const HamiltonianSpec& ham);

/// E_delta = integral m L(-w/m) + integral (delta V + 1) m.
KineticValue energy_delta(const FlowPair& pair, const ProblemSpec& spec);

/// E_0 = integral m L(-w/m) + integral m.
KineticValue energy_zero(const FlowPair& pair, const HamiltonianSpec& ham);

/// J_0 = integral m L(-w/m) - 1/(1+alpha) integral m^(1+alpha).
KineticValue j_zero(const FlowPair& pair, const HamiltonianSpec& ham, double alpha);

/// Gagliardo-Nirenberg quotient
///   (kinetic)^(n a / g') (mass)^(((a+1)g' - n a)/g') / integral m^(1+a).
/// Throws ValidationError when the kinetic term is zero/infinite or the
/// denominator vanishes (degenerate pair).
double gn_quotient(const FlowPair& pair, const HamiltonianSpec& ham, double alpha);

/// P = kinetic - n a /((1+a) g') integral m^(1+a).
double pohozaev_p(const FlowPair& pair, const HamiltonianSpec& ham, double alpha);

struct PohozaevResiduals {
    double r1;          // mass identity   (1/mu) int m = c_P int m^(1+a)
    double r2;          // kinetic identity int mL = n mu a/((1+a)g') int m^(1+a)
    double r2_fenchel;  // int mL vs (gamma-1) int m H(grad u)
};

// Forward declaration; defined in solver.hpp.
struct SolutionTriple;

/// Relative residuals of the two integral identities a converged potential-free
/// solution must satisfy.
PohozaevResiduals pohozaev_residuals(const SolutionTriple& sol, double alpha);

/// One row of the functional CSV report.
struct FunctionalRow {
    std::string name;
    double value;
    double alpha;
    double gamma;
    double delta;
    int grid_n;
};

void write_functional_csv(const std::string& path,
                          const std::vector<FunctionalRow>& rows);

} // namespace mfgs
