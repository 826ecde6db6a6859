#include "mfgs/hamiltonian.hpp"

#include "mfgs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace mfgs {

namespace {

bool all_finite(std::span<const double> p) {
    for (double v : p)
        if (!std::isfinite(v)) return false;
    return true;
}

double coeff(const HamiltonianSpec& spec, std::size_t axis) {
    if (spec.kind == HamiltonianKind::IsotropicPower) return spec.coefficients[0];
    return spec.coefficients[axis];
}

double norm2(std::span<const double> p) {
    double s = 0.0;
    for (double v : p) s += v * v;
    return std::sqrt(s);
}

// 1D conjugate of t -> C|t|^gamma evaluated at q:
//   sup_t t q - C|t|^gamma = (1/gamma') (gamma C)^(1-gamma') |q|^gamma'
double conj_power_1d(double c, double gamma, double gp, double q) {
    if (q == 0.0) return 0.0;
    return (1.0 / gp) * std::pow(gamma * c, 1.0 - gp) * std::pow(std::abs(q), gp);
}

} // namespace

void HamiltonianSpec::validate() const {
    if (!(gamma > 1.0) || !std::isfinite(gamma))
        throw ValidationError("hamiltonian: gamma must be finite and > 1");
    if (coefficients.empty())
        throw ValidationError("hamiltonian: at least one coefficient required");
    for (double c : coefficients)
        if (!(c > 0.0) || !std::isfinite(c))
            throw ValidationError("hamiltonian: coefficients must be finite and > 0");
}

namespace {

// Extrema of sum_i c_i |p_i|^g on the unit sphere. With t_i = p_i^2 the
// objective sum_i c_i t_i^(g/2) on the simplex is convex for g >= 2 (vertex
// maximum, interior minimum) and concave for g < 2 (swapped).
std::pair<double, double> sphere_extrema(const std::vector<double>& c, double g,
                                         int dim) {
    auto axis_extreme = [&](bool want_max) {
        double v = c[0];
        for (int i = 1; i < dim; ++i) v = want_max ? std::max(v, c[i]) : std::min(v, c[i]);
        return v;
    };
    if (std::abs(g - 2.0) < 1e-14) return {axis_extreme(false), axis_extreme(true)};
    // interior stationary point: c_i t_i^(g/2-1) equal -> t_i ~ c_i^(-2/(g-2))
    const double ex = -2.0 / (g - 2.0);
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += std::pow(c[i], ex);
    double interior = 0.0;
    for (int i = 0; i < dim; ++i)
        interior += c[i] * std::pow(std::pow(c[i], ex) / s, g / 2.0);
    if (g > 2.0) return {interior, axis_extreme(true)};
    return {axis_extreme(false), interior};
}

} // namespace

HamiltonianBounds hamiltonian_bounds(const HamiltonianSpec& spec, int dim) {
    spec.validate();
    const double gp = spec.gamma_prime();
    HamiltonianBounds b{};
    if (spec.kind == HamiltonianKind::IsotropicPower) {
        const double c = spec.coefficients[0];
        b.c_h = b.c_h_upper = c;
        const double cl = conj_power_1d(c, spec.gamma, gp, 1.0);
        b.c_l = b.c_l_upper = cl;
        return b;
    }
    if (static_cast<int>(spec.coefficients.size()) < dim)
        throw ValidationError("hamiltonian: coefficient count below dimension");

    std::tie(b.c_h, b.c_h_upper) = sphere_extrema(spec.coefficients, spec.gamma, dim);

    // L is again a separable power sum with exponent gamma' and coefficients
    // (1/gamma')(gamma C_i)^(1-gamma'); same extremal analysis
    std::vector<double> dual(dim);
    for (int i = 0; i < dim; ++i)
        dual[i] = conj_power_1d(coeff(spec, i), spec.gamma, gp, 1.0);
    std::tie(b.c_l, b.c_l_upper) = sphere_extrema(dual, gp, dim);
    return b;
}

double eval_h(const HamiltonianSpec& spec, std::span<const double> p) {
    if (!all_finite(p)) throw ValidationError("eval_h: non-finite input");
    if (spec.kind == HamiltonianKind::IsotropicPower)
        return spec.coefficients[0] * std::pow(norm2(p), spec.gamma);
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        s += coeff(spec, i) * std::pow(std::abs(p[i]), spec.gamma);
    return s;
}

void grad_h(const HamiltonianSpec& spec, std::span<const double> p,
            std::span<double> g, bool* degenerate) {
    if (!all_finite(p)) throw ValidationError("grad_h: non-finite input");
    if (degenerate) *degenerate = false;
    const double gamma = spec.gamma;
    if (spec.kind == HamiltonianKind::IsotropicPower) {
        const double r = norm2(p);
        if (r == 0.0) {
            if (gamma < 2.0 && degenerate) *degenerate = true;
            std::fill(g.begin(), g.end(), 0.0);
            return;
        }
        const double f = gamma * spec.coefficients[0] * std::pow(r, gamma - 2.0);
        for (std::size_t i = 0; i < p.size(); ++i) g[i] = f * p[i];
        return;
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) {
            if (gamma < 2.0 && degenerate) *degenerate = true;
            g[i] = 0.0;
        } else {
            g[i] = gamma * coeff(spec, i) * std::pow(std::abs(p[i]), gamma - 2.0) * p[i];
        }
    }
}

double eval_l(const HamiltonianSpec& spec, std::span<const double> q) {
    if (!all_finite(q)) throw ValidationError("eval_l: non-finite input");
    const double gp = spec.gamma_prime();
    if (spec.kind == HamiltonianKind::IsotropicPower)
        return conj_power_1d(spec.coefficients[0], spec.gamma, gp, norm2(q));
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        s += conj_power_1d(coeff(spec, i), spec.gamma, gp, q[i]);
    return s;
}

double eval_l_numeric(const HamiltonianSpec& spec, std::span<const double> q,
                      double tol) {
    if (!all_finite(q)) throw ValidationError("eval_l_numeric: non-finite input");
    // Each separable 1D problem sup_{r>=0} r|q_i| - C r^gamma is unimodal in r.
    auto golden_1d = [&](double c, double qa) {
        const double aq = std::abs(qa);
        if (aq == 0.0) return 0.0;
        auto f = [&](double r) { return r * aq - c * std::pow(r, spec.gamma); };
        // bracket the maximizer: f eventually negative since gamma > 1
        double hi = 1.0;
        while (f(hi) > f(hi * 0.5) && hi < 1e12) hi *= 2.0;
        double lo = 0.0;
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
        double f1 = f(x1), f2 = f(x2);
        while (hi - lo > tol * std::max(1.0, hi)) {
            if (f1 < f2) {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + invphi * (hi - lo); f2 = f(x2);
            } else {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - invphi * (hi - lo); f1 = f(x1);
            }
        }
        return f(0.5 * (lo + hi));
    };

    if (spec.kind == HamiltonianKind::IsotropicPower) {
        // optimal p is aligned with q: reduce to the radius
        return golden_1d(spec.coefficients[0], norm2(q));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        s += golden_1d(coeff(spec, i), q[i]);
    return s;
}

KineticValue kinetic_density(const HamiltonianSpec& spec, double m,
                             std::span<const double> w) {
    KineticValue kv;
    bool w_zero = true;
    for (double v : w)
        if (v != 0.0) { w_zero = false; break; }
    if (m > 0.0) {
        double q[2] = {0.0, 0.0};
        for (std::size_t i = 0; i < w.size(); ++i) q[i] = -w[i] / m;
        kv.value = m * eval_l(spec, std::span<const double>(q, w.size()));
        return kv;
    }
    if (m == 0.0 && w_zero) return kv; // 0 by definition
    kv.infinite = true;
    kv.value = std::numeric_limits<double>::infinity();
    return kv;
}

double fenchel_residual(const HamiltonianSpec& spec, std::span<const double> p) {
    double g[2] = {0.0, 0.0};
    std::span<double> gs(g, p.size());
    grad_h(spec, p, gs);
    const double lhs = eval_l(spec, std::span<const double>(g, p.size()));
    const double rhs = (spec.gamma - 1.0) * eval_h(spec, p);
    return std::abs(lhs - rhs);
}

} // namespace mfgs
