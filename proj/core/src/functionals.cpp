#include "mfgs/functionals.hpp"

#include "mfgs/errors.hpp"
#include "mfgs/solver.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace mfgs {

std::string to_string(PotentialKind k) {
    switch (k) {
        case PotentialKind::Power: return "power";
        case PotentialKind::Log: return "log";
        default: return "zero";
    }
}

PotentialKind potential_kind_from_string(const std::string& s) {
    if (s == "power") return PotentialKind::Power;
    if (s == "log") return PotentialKind::Log;
    if (s == "zero") return PotentialKind::Zero;
    throw ValidationError("unknown potential kind: " + s);
}

void PotentialSpec::validate() const {
    if (kind == PotentialKind::Zero) return;
    if (!(c_v > 0.0) || !std::isfinite(c_v))
        throw ValidationError("potential: C_V must be finite and > 0");
    if (kind == PotentialKind::Power && (!(b > 0.0) || !std::isfinite(b)))
        throw ValidationError("potential: exponent b must be finite and > 0");
}

double eval_potential(const PotentialSpec& spec, std::span<const double> x) {
    double r = 0.0;
    for (double v : x) r += v * v;
    r = std::sqrt(r);
    switch (spec.kind) {
        case PotentialKind::Power: return spec.c_v * std::pow(r, spec.b);
        case PotentialKind::Log: return spec.c_v * std::log1p(r);
        default: return 0.0;
    }
}

Field potential_field(const PotentialSpec& spec, const Domain& domain) {
    Field f(domain);
    double x[2];
    for (std::size_t i = 0; i < f.size(); ++i) {
        domain.coords(i, x);
        f[i] = eval_potential(spec, std::span<const double>(x, domain.dim));
    }
    return f;
}

std::string to_string(MassMode m) {
    return m == MassMode::L1PlusAlpha ? "L1plusAlpha" : "L1";
}

MassMode mass_mode_from_string(const std::string& s) {
    if (s == "L1plusAlpha") return MassMode::L1PlusAlpha;
    if (s == "L1") return MassMode::L1;
    throw ValidationError("unknown mass mode: " + s);
}

double ProblemSpec::alpha_upper() const {
    const double gp = hamiltonian.gamma_prime();
    const double n = domain.dim;
    if (n <= gp) return std::numeric_limits<double>::infinity();
    return gp / (n - gp);
}

void ProblemSpec::validate() const {
    hamiltonian.validate();
    potential.validate();
    domain.validate();
    if (hamiltonian.kind == HamiltonianKind::AnisotropicSum &&
        static_cast<int>(hamiltonian.coefficients.size()) != domain.dim)
        throw ValidationError("problem: anisotropic coefficient count must equal dim");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ValidationError("problem: alpha must be finite and > 0");
    if (alpha >= alpha_upper())
        throw ValidationError("problem: alpha must be below the Sobolev-critical exponent");
    if (!(delta >= 0.0) || !(delta < 1.0))
        throw ValidationError("problem: delta must lie in [0,1)");
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw ValidationError("problem: mass must be finite and > 0");
}

// ---------------------------------------------------------------------------
// energies
// ---------------------------------------------------------------------------

KineticValue kinetic_integral(const FlowPair& pair, const HamiltonianSpec& ham) {
    const Field& m = pair.m;
    const int dim = m.domain.dim;
    const double mmax = max_abs(m);
    double wmax = 0.0;
    for (int a = 0; a < dim; ++a)
        for (double v : pair.w.comp[a]) wmax = std::max(wmax, std::abs(v));
    const double eps_m = 1e-14 * mmax;
    const double eps_w = 1e-14 * wmax;

    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        double w[2] = {pair.w.comp[0].empty() ? 0.0 : pair.w.comp[0][i],
                       dim == 2 ? pair.w.comp[1][i] : 0.0};
        double x;
        if (m[i] <= eps_m) {
            const double wn = dim == 2 ? std::hypot(w[0], w[1]) : std::abs(w[0]);
            if (m[i] < 0.0 || wn > eps_w)
                return {std::numeric_limits<double>::infinity(), true};
            x = 0.0;
        } else {
            KineticValue kd = kinetic_density(ham, m[i], std::span<const double>(w, dim));
            if (kd.infinite) return kd;
            x = kd.value;
        }
        double t = s + x;
        if (std::abs(s) >= std::abs(x)) c += (s - t) + x; else c += (x - t) + s;
        s = t;
    }
    return {m.domain.cell_volume() * (s + c), false};
}

KineticValue energy_delta(const FlowPair& pair, const ProblemSpec& spec) {
    KineticValue kin = kinetic_integral(pair, spec.hamiltonian);
    if (kin.infinite) return kin;
    Field vf = potential_field(spec.potential, pair.m.domain);
    double s = 0.0;
    for (std::size_t i = 0; i < pair.m.size(); ++i)
        s += (spec.delta * vf[i] + 1.0) * pair.m[i];
    return {kin.value + pair.m.domain.cell_volume() * s, false};
}

KineticValue energy_zero(const FlowPair& pair, const HamiltonianSpec& ham) {
    KineticValue kin = kinetic_integral(pair, ham);
    if (kin.infinite) return kin;
    return {kin.value + integrate(pair.m), false};
}

KineticValue j_zero(const FlowPair& pair, const HamiltonianSpec& ham, double alpha) {
    KineticValue kin = kinetic_integral(pair, ham);
    if (kin.infinite) return kin;
    Field ma(pair.m.domain);
    for (std::size_t i = 0; i < pair.m.size(); ++i)
        ma[i] = std::pow(std::abs(pair.m[i]), 1.0 + alpha);
    return {kin.value - integrate(ma) / (1.0 + alpha), false};
}

namespace {

double m_power_integral(const Field& m, double p) {
    Field mp(m.domain);
    for (std::size_t i = 0; i < m.size(); ++i)
        mp[i] = std::pow(std::abs(m[i]), p);
    return integrate(mp);
}

} // namespace

double gn_quotient(const FlowPair& pair, const HamiltonianSpec& ham, double alpha) {
    KineticValue kin = kinetic_integral(pair, ham);
    if (kin.infinite || !(kin.value > 0.0))
        throw ValidationError("gn_quotient: degenerate pair (kinetic term not positive finite)");
    const double denom = m_power_integral(pair.m, 1.0 + alpha);
    if (!(denom > 0.0))
        throw ValidationError("gn_quotient: integral of m^(1+alpha) not positive");
    const double mass = integrate(pair.m);
    const double gp = ham.gamma_prime();
    const double n = pair.m.domain.dim;
    return std::pow(kin.value, n * alpha / gp) *
           std::pow(mass, ((alpha + 1.0) * gp - n * alpha) / gp) / denom;
}

double pohozaev_p(const FlowPair& pair, const HamiltonianSpec& ham, double alpha) {
    KineticValue kin = kinetic_integral(pair, ham);
    if (kin.infinite)
        throw ValidationError("pohozaev_p: infeasible pair (infinite kinetic term)");
    const double gp = ham.gamma_prime();
    const double n = pair.m.domain.dim;
    return kin.value -
           n * alpha / ((1.0 + alpha) * gp) * m_power_integral(pair.m, 1.0 + alpha);
}

PohozaevResiduals pohozaev_residuals(const SolutionTriple& sol, double alpha) {
    const HamiltonianSpec& ham = sol.hamiltonian;
    const double gp = ham.gamma_prime();
    const double n = sol.m.domain.dim;
    const double mu = sol.multiplier;

    FlowPair pair{sol.m, sol.w};
    KineticValue kinv = kinetic_integral(pair, ham);
    const double kin = kinv.value;
    const double mass = integrate(sol.m);
    const double i1a = m_power_integral(sol.m, 1.0 + alpha);

    const double c_p = ((alpha + 1.0) * gp - n * alpha) / ((alpha + 1.0) * gp);
    PohozaevResiduals r{};
    r.r1 = std::abs(mass / mu - c_p * i1a) / std::abs(c_p * i1a);
    const double rhs2 = n * mu * alpha / ((alpha + 1.0) * gp) * i1a;
    r.r2 = std::abs(kin - rhs2) / std::abs(rhs2);

    // (gamma-1) int m H(grad u) vs int m L(-w/m); exact up to rounding when
    // w = -m grad H(grad u)
    VectorField gu = gradient(sol.u);
    double mh = 0.0;
    for (std::size_t i = 0; i < sol.m.size(); ++i) {
        double p[2] = {gu.comp[0][i], sol.m.domain.dim == 2 ? gu.comp[1][i] : 0.0};
        mh += sol.m[i] * eval_h(ham, std::span<const double>(p, sol.m.domain.dim));
    }
    mh *= sol.m.domain.cell_volume() * (ham.gamma - 1.0);
    r.r2_fenchel = std::abs(kin - mh) / std::max(std::abs(kin), 1e-300);
    return r;
}

void write_functional_csv(const std::string& path,
                          const std::vector<FunctionalRow>& rows) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << "name,value,alpha,gamma,delta,grid_N\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g", r.value);
        os << r.name << ',' << buf << ',' << r.alpha << ',' << r.gamma << ','
           << r.delta << ',' << r.grid_n << '\n';
    }
    if (!os) throw IoError("write failed: " + path);
}

} // namespace mfgs
