#include "mfgs/scaling.hpp"

#include "mfgs/errors.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace mfgs {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Subcritical: return "subcritical";
        case Regime::Critical: return "critical";
        default: return "supercritical";
    }
}

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt(*v) : std::string("");
}

} // namespace

std::string RegimeReport::to_text() const {
    std::ostringstream os;
    os << "alpha = " << fmt(alpha) << "\n"
       << "gamma_prime = " << fmt(gamma_prime) << "\n"
       << "n = " << n << "\n"
       << "alpha_star = " << fmt(alpha_star) << "\n"
       << "alpha_upper = " << fmt(alpha_upper) << "\n"
       << "hat_q = " << fmt(hat_q) << "\n"
       << "regime = " << to_string(regime) << "\n";
    if (gamma_alpha) os << "Gamma_alpha = " << fmt(*gamma_alpha) << "\n";
    if (e0) os << "e0 = " << fmt(*e0) << "\n";
    if (m_star) os << "M_star = " << fmt(*m_star) << "\n";
    if (e_mp) os << "e_MP = " << fmt(*e_mp) << "\n";
    if (lambda_critical) os << "lambda_critical = " << fmt(*lambda_critical) << "\n";
    return os.str();
}

std::string RegimeReport::csv_header() {
    return "alpha,gamma_prime,n,alpha_star,alpha_upper,hat_q,regime,"
           "Gamma_alpha,e0,M_star,e_MP,lambda_critical";
}

std::string RegimeReport::to_csv_row() const {
    std::ostringstream os;
    os << fmt(alpha) << ',' << fmt(gamma_prime) << ',' << n << ',' << fmt(alpha_star)
       << ',' << fmt(alpha_upper) << ',' << fmt(hat_q) << ',' << to_string(regime)
       << ',' << fmt_opt(gamma_alpha) << ',' << fmt_opt(e0) << ',' << fmt_opt(m_star)
       << ',' << fmt_opt(e_mp) << ',' << fmt_opt(lambda_critical);
    return os.str();
}

RegimeReport classify(double alpha, double gamma, int n) {
    if (!(gamma > 1.0) || !std::isfinite(gamma))
        throw ValidationError("classify: gamma must be > 1");
    if (n < 1) throw ValidationError("classify: n must be >= 1");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ValidationError("classify: alpha must be > 0");

    RegimeReport rep;
    rep.alpha = alpha;
    rep.gamma_prime = gamma / (gamma - 1.0);
    rep.n = n;
    rep.alpha_star = rep.gamma_prime / n;
    rep.alpha_upper = (n > rep.gamma_prime)
                          ? rep.gamma_prime / (n - rep.gamma_prime)
                          : std::numeric_limits<double>::infinity();
    if (alpha >= rep.alpha_upper)
        throw ValidationError(
            "classify: alpha at or above the Sobolev-critical exponent " +
            fmt(rep.alpha_upper));

    // exponent of the admissible function space; diagnostic only (for
    // gamma' = n the value is a free choice inside (2n/(n+2), n); the midpoint
    // is reported)
    if (rep.gamma_prime < n)
        rep.hat_q = n / (n - rep.gamma_prime + 1.0);
    else if (rep.gamma_prime > n)
        rep.hat_q = rep.gamma_prime;
    else
        rep.hat_q = 0.5 * (2.0 * n / (n + 2.0) + n);

    const double tol = 1e-12 * std::max(1.0, rep.alpha_star);
    if (std::abs(alpha - rep.alpha_star) <= tol)
        rep.regime = Regime::Critical;
    else if (alpha < rep.alpha_star)
        rep.regime = Regime::Subcritical;
    else
        rep.regime = Regime::Supercritical;
    return rep;
}

FlowPair rescale_pair(const FlowPair& pair, double s, double t) {
    if (!(s > 0.0) || !(t > 0.0))
        throw ValidationError("rescale_pair: s and t must be > 0");
    FlowPair out = pair;
    out.m.domain.half_width /= t;
    out.w.domain.half_width /= t;
    for (double& v : out.m.values) v *= s;
    for (int a = 0; a < out.w.domain.dim; ++a)
        for (double& v : out.w.comp[a]) v *= s * t;
    return out;
}

FlowPair dilation_path(const FlowPair& pair, double t) {
    if (!(t > 0.0)) throw ValidationError("dilation_path: t must be > 0");
    const int n = pair.m.domain.dim;
    return rescale_pair(pair, std::pow(t, n), t);
}

SolutionTriple scale_to_mass(const SolutionTriple& sol, double mass) {
    if (sol.mode != MassMode::L1PlusAlpha)
        throw ValidationError("scale_to_mass: input must be an L^(1+alpha)-mode triple");
    if (!(sol.multiplier > 0.0))
        throw ValidationError("scale_to_mass: requires multiplier mu > 0");
    if (!(mass > 0.0)) throw ValidationError("scale_to_mass: mass must be > 0");
    const double gp = sol.hamiltonian.gamma_prime();
    const double gamma = sol.hamiltonian.gamma;
    const double a = sol.alpha;
    const int n = sol.m.domain.dim;
    const double na = n * a;
    if (std::abs(na - gp) < 1e-12 * std::max(1.0, gp))
        throw ValidationError(
            "scale_to_mass: exponents singular at the critical case n*alpha = gamma'; "
            "use the critical formula suite instead");

    const double mu = sol.multiplier;
    const double T = (1.0 - na / ((1.0 + a) * gp)) / mass * std::pow(mu, 1.0 + 1.0 / a);
    const double s0 = std::pow(mu, 1.0 / a) * std::pow(T, gp / (na - gp));
    const double t0 = std::pow(T, a * (gp - 2.0) / (na - gp));
    const double r0 = std::pow(T, a / (na - gp));

    SolutionTriple out = sol;
    out.mode = MassMode::L1;
    out.multiplier = -t0 * r0 * r0;
    out.u.domain.half_width /= r0;
    out.m.domain.half_width /= r0;
    out.w.domain.half_width /= r0;
    for (double& v : out.m.values) v *= s0;
    for (double& v : out.u.values) v *= t0;
    // w^ = s0 (t0 r0)^(gamma-1) w(r0 x), matching -m^ grad H(grad u^) exactly
    const double wf = s0 * std::pow(t0 * r0, gamma - 1.0);
    for (int ax = 0; ax < out.w.domain.dim; ++ax)
        for (double& v : out.w.comp[ax]) v *= wf;
    out.tail_mass = tail_mass_fraction(out.m);
    return out;
}

double gn_constant_from_e0(double alpha, double gamma_prime, int n, double e0) {
    if (!(e0 > 0.0)) throw ValidationError("gn_constant_from_e0: e0 must be > 0");
    const double na = n * alpha;
    const double ag = (1.0 + alpha) * gamma_prime;
    if (!(ag > na))
        throw ValidationError("gn_constant_from_e0: requires alpha below the "
                              "Sobolev-critical exponent ((1+a)g' > n a)");
    return std::pow(na / (ag - na), na / gamma_prime) *
           std::pow((ag - na) / ag * e0, 1.0 + alpha);
}

double mountain_pass_level(double alpha, double gamma_prime, int n, double e0,
                           double mass) {
    if (!(e0 > 0.0) || !(mass > 0.0))
        throw ValidationError("mountain_pass_level: e0 and M must be > 0");
    const double na = n * alpha;
    const double ag = (1.0 + alpha) * gamma_prime;
    if (!(na > gamma_prime))
        throw ValidationError("mountain_pass_level: no mountain-pass geometry below "
                              "the mass-critical exponent (requires n a > gamma')");
    if (!(ag > na))
        throw ValidationError("mountain_pass_level: requires alpha below the "
                              "Sobolev-critical exponent");
    return (na - gamma_prime) / ag *
           std::pow((1.0 - na / ag) / mass, (ag - na) / (na - gamma_prime)) *
           std::pow(e0, ag / (na - gamma_prime));
}

OptimalDilation optimal_dilation(const FlowPair& pair, const HamiltonianSpec& ham,
                                 double alpha) {
    const double gp = ham.gamma_prime();
    const int n = pair.m.domain.dim;
    const double na = n * alpha;
    if (!(na > gp))
        throw ValidationError("optimal_dilation: dilation energy has no interior "
                              "maximum unless n a > gamma'");
    KineticValue kin = kinetic_integral(pair, ham);
    if (kin.infinite || !(kin.value > 0.0))
        throw ValidationError("optimal_dilation: kinetic term must be positive finite");
    Field ma(pair.m.domain);
    for (std::size_t i = 0; i < pair.m.size(); ++i)
        ma[i] = std::pow(std::abs(pair.m[i]), 1.0 + alpha);
    const double b = integrate(ma);
    if (!(b > 0.0))
        throw ValidationError("optimal_dilation: integral m^(1+alpha) must be > 0");

    const double t_star =
        std::pow(gp * (1.0 + alpha) * kin.value / (na * b), 1.0 / (na - gp));
    const double j_max = (na - gp) / ((1.0 + alpha) * gp) * b * std::pow(t_star, na);
    return {t_star, j_max};
}

double critical_mass(double gamma_at_alpha_star, double alpha_star) {
    if (!(gamma_at_alpha_star > 0.0) || !(alpha_star > 0.0))
        throw ValidationError("critical_mass: inputs must be > 0");
    return std::pow(gamma_at_alpha_star * (1.0 + alpha_star), 1.0 / alpha_star);
}

double critical_multiplier(double m_star, double gamma_prime, int n) {
    if (!(m_star > 0.0)) throw ValidationError("critical_multiplier: M* must be > 0");
    return -gamma_prime / (n * m_star);
}

CriticalScalings critical_scalings(double m_star, double gamma_prime, int n,
                                   double e0) {
    if (!(m_star > 0.0) || !(e0 > 0.0))
        throw ValidationError("critical_scalings: inputs must be > 0");
    const double c = gamma_prime / (n * m_star); // = t1 r1^2
    CriticalScalings s;
    s.s1 = std::pow(c * e0, n / gamma_prime);
    s.t1 = std::pow(c, (gamma_prime - 2.0) / gamma_prime);
    s.r1 = std::pow(c, 1.0 / gamma_prime);
    const double check = s.t1 * s.r1 * s.r1;
    if (std::abs(check - c) > 1e-10 * std::max(1.0, std::abs(c)))
        throw ValidationError("critical_scalings: internal identity t1 r1^2 = "
                              "gamma'/(n M*) violated (formula transcription error)");
    return s;
}

} // namespace mfgs
