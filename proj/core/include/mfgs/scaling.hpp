#pragma once

#include "mfgs/solver.hpp"

#include <optional>
#include <string>

namespace mfgs {

enum class Regime { Subcritical, Critical, Supercritical };

std::string to_string(Regime r);

struct RegimeReport {
    double alpha = 0.0;
    double gamma_prime = 0.0;
    int n = 1;
    double alpha_star = 0.0;   // gamma'/n
    double alpha_upper = 0.0;  // gamma'/(n-gamma'), +inf when n <= gamma'
    double hat_q = 0.0;        // reported only; no discrete constraint uses it
    Regime regime = Regime::Subcritical;

    std::optional<double> gamma_alpha;      // best constant, when supplied
    std::optional<double> e0;
    std::optional<double> m_star;           // populated only at criticality
    std::optional<double> e_mp;
    std::optional<double> lambda_critical;

    std::string to_text() const;  // flat key-value block
    std::string to_csv_row() const;
    static std::string csv_header();
};

/// Regime classification. Throws ValidationError when alpha is outside
/// (0, alpha_upper) or the parameters are malformed.
RegimeReport classify(double alpha, double gamma, int n);

/// Value/dilation rescaling (m,w)(x) -> (s m(tx), s t w(tx)) realized purely on
/// grid metadata: half_width /= t, m *= s, w *= s*t. Preserves the discrete
/// Fokker-Planck coupling and leaves the Gagliardo-Nirenberg quotient invariant
/// for every s, t > 0.
FlowPair rescale_pair(const FlowPair& pair, double s, double t);

/// Mass-preserving dilation (m_t, w_t) = (t^n m(tx), t^(n+1) w(tx)).
FlowPair dilation_path(const FlowPair& pair, double t);

/// L^(1+alpha)-normalized solution -> L1 solution with integral m = M:
///   m^(x) = s0 m(r0 x), u^(x) = t0 u(r0 x), lambda^ = -t0 r0^2,
/// exponents built from T = (1 - n a/((1+a)g')) mu^(1+1/a) / M.
/// Throws ValidationError at the critical exponent n a = g' (scaling singular)
/// or when the input is not a converged L^(1+alpha)-mode triple with mu > 0.
SolutionTriple scale_to_mass(const SolutionTriple& sol, double mass);

/// Gamma_alpha = (na/((1+a)g'-na))^(na/g') * (((1+a)g'-na)/((1+a)g') e0)^(1+a).
double gn_constant_from_e0(double alpha, double gamma_prime, int n, double e0);

/// e_MP = ((na-g')/((1+a)g')) [(1-na/((1+a)g'))/M]^(((1+a)g'-na)/(na-g'))
///        * e0^((1+a)g'/(na-g')).  Requires alpha above alpha_star.
double mountain_pass_level(double alpha, double gamma_prime, int n, double e0,
                           double mass);

struct OptimalDilation {
    double t_star;
    double j_max;
};

/// Unique maximizer of t -> t^g' A - t^(na) B/(1+a) with A = kinetic term and
/// B = integral m^(1+a); requires na > g'. At t* the Pohozaev functional of the
/// dilated pair vanishes.
OptimalDilation optimal_dilation(const FlowPair& pair, const HamiltonianSpec& ham,
                                 double alpha);

/// M* = (Gamma_{alpha*} (1+alpha*))^(1/alpha*).
double critical_mass(double gamma_at_alpha_star, double alpha_star);

/// lambda = -gamma'/(n M*).
double critical_multiplier(double m_star, double gamma_prime, int n);

struct CriticalScalings {
    double s1;
    double t1;
    double r1;
};

/// The critical-case triple scalings; self-checks t1 r1^2 = gamma'/(n M*) to
/// 1e-10 and throws on transcription drift.
CriticalScalings critical_scalings(double m_star, double gamma_prime, int n,
                                   double e0);

} // namespace mfgs
