#pragma once

#include <span>
#include <vector>

namespace mfgs {

enum class HamiltonianKind {
    IsotropicPower, // H(p) = C |p|^gamma
    AnisotropicSum, // H(p) = sum_i C_i |p_i|^gamma
};

/// gamma-homogeneous Hamiltonian with positive coefficients.
/// For IsotropicPower only coefficients[0] is used; for AnisotropicSum the
/// coefficient count must match the dimension of every point passed in.
struct HamiltonianSpec {
    HamiltonianKind kind = HamiltonianKind::IsotropicPower;
    double gamma = 2.0;
    std::vector<double> coefficients = {1.0};

    double gamma_prime() const { return gamma / (gamma - 1.0); }

    /// Throws ValidationError unless gamma > 1 and all coefficients > 0.
    void validate() const;
};

struct HamiltonianBounds {
    double c_h;       // inf_{|p|=1} H
    double c_h_upper; // sup_{|p|=1} H
    double c_l;       // inf_{|q|=1} L
    double c_l_upper; // sup_{|q|=1} L
};

/// Tight per-spec constants for C_H |p|^gamma <= H <= C'_H |p|^gamma and the
/// dual bounds on L. For the isotropic kind lower and upper coincide.
HamiltonianBounds hamiltonian_bounds(const HamiltonianSpec& spec, int dim);

/// H(p). Throws ValidationError on non-finite input.
double eval_h(const HamiltonianSpec& spec, std::span<const double> p);

/// grad H(p), written into g (same length as p).
/// For gamma < 2 the gradient is singular at p = 0; the continuous extension 0
/// is returned and *degenerate is set when the caller provides it.
void grad_h(const HamiltonianSpec& spec, std::span<const double> p,
            std::span<double> g, bool* degenerate = nullptr);

/// Legendre transform L(q) = sup_p [p.q - H(p)], in closed form.
double eval_l(const HamiltonianSpec& spec, std::span<const double> q);

/// Fallback maximization of p.q - H(p) by golden-section search on each
/// separable axis (isotropic: on the radius along q). Cross-validates eval_l.
double eval_l_numeric(const HamiltonianSpec& spec, std::span<const double> q,
                      double tol = 1e-12);

/// Extended-valued result of m L(-w/m).
struct KineticValue {
    double value = 0.0;
    bool infinite = false;
};

/// m L(-w/m): 0 when (m,w) = (0,0), +infinity sentinel when m <= 0 with w != 0
/// or m < 0.
KineticValue kinetic_density(const HamiltonianSpec& spec, double m,
                             std::span<const double> w);

/// |L(grad H(p)) - (gamma-1) H(p)|; zero in exact arithmetic for any
/// homogeneous H (this is the identity behind w = -m grad H(grad u)).
double fenchel_residual(const HamiltonianSpec& spec, std::span<const double> p);

} // namespace mfgs
