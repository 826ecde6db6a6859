#pragma once

#include "mfgs/functionals.hpp"
#include "mfgs/nls.hpp"
#include "mfgs/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mfgs {

enum class CertStatus { Pass, Fail, Inconclusive };

std::string to_string(CertStatus s);

struct CertResidual {
    std::string label;
    double value;
    double tolerance; // residual passes iff value <= tolerance
};

struct CertificateReport {
    std::string name;
    std::vector<CertResidual> residuals;
    CertStatus status = CertStatus::Pass;
    std::string notes;

    bool passed() const { return status == CertStatus::Pass; }
    /// Recompute status from the residual table (Inconclusive is sticky).
    void finalize();
    std::string to_text() const;
};

void write_certificate_csv(const std::string& path,
                           const std::vector<CertificateReport>& reports);

/// Pohozaev identity residuals of a converged potential-free triple; the
/// cell-wise Fenchel identity is held to 1e-8, the two integral identities to
/// `tol`. When a solution of the same problem on a twice-finer grid is given,
/// the refinement order of both residuals must reach `min_order`.
CertificateReport check_pohozaev(const SolutionTriple& sol, double alpha,
                                 double tol = 1e-3,
                                 const SolutionTriple* refined = nullptr,
                                 double min_order = 1.5);

/// Exponential-decay certificate: least-squares fit of log m against |x| over
/// a 25%-of-R wide radial shell held an eighth of R clear of the wall (the
/// no-flux boundary bends the tail over an O(1) layer). Pass needs slope < 0,
/// fit R^2 > 0.99, and agreement of the two half-shell slopes within 10% (a
/// straight log-tail, not merely a correlated one).
CertificateReport check_decay(const Field& m);

/// Gradient/lower-bound constants |grad u| <= C (1 + delta V)^(1/gamma) and
/// u >= C3 (delta V)^(1/gamma) - C4. A verdict needs the same solve on a finer
/// grid: pass iff the fitted C agrees within 10% across the two grids.
CertificateReport check_gradient_bound(const Field& u, const PotentialSpec& v,
                                       double delta, double gamma,
                                       const Field* u_refined = nullptr);

struct NlsOracleOptions {
    double density_tol = 0.0;     // 0 -> 1e-3 (1D) / 1e-2 (2D)
    double multiplier_tol = 1e-3; // 1D only
    double ode_step = 1e-4;
};

/// Independent ground-state comparison for quadratic isotropic Hamiltonians:
/// the system collapses to -Delta v + beta v = c v^(2 alpha + 1) under m = v^2,
/// with beta = -C_H lambda in L1 mode and beta = C_H, c = C_H mu in
/// L^(1+alpha) mode. Solves that scalar problem by shooting (1D) or
/// Nehari-normalized gradient flow (2D) and reports the sup-relative density
/// mismatch, the multiplier/mass mismatch, and the Hopf-Cole log-relation
/// residual.
CertificateReport nls_oracle(const SolutionTriple& sol,
                             const NlsOracleOptions& opts = {});

/// Mountain-pass geometry probe along the canonical dilation path: the kinetic
/// level-R0 crossing must have positive energy strictly below the level-2R0
/// crossing, and the dilation energy must be unimodal. A necessary-condition
/// check: the full infimum over the R0 ball is not computable.
CertificateReport geometry_probe(const FlowPair& pair, const HamiltonianSpec& ham,
                                 double alpha, double r0);

} // namespace mfgs
