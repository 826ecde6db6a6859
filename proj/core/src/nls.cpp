#include "mfgs/nls.hpp"

#include "mfgs/errors.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>

namespace mfgs {

namespace {

struct OdeState {
    double phi;
    double psi; // phi'
};

inline OdeState rhs(const OdeState& y, double p) {
    return {y.psi, y.phi - std::pow(std::abs(y.phi), p - 1.0) * y.phi};
}

inline OdeState rk4_step(const OdeState& y, double h, double p) {
    OdeState k1 = rhs(y, p);
    OdeState k2 = rhs({y.phi + 0.5 * h * k1.phi, y.psi + 0.5 * h * k1.psi}, p);
    OdeState k3 = rhs({y.phi + 0.5 * h * k2.phi, y.psi + 0.5 * h * k2.psi}, p);
    OdeState k4 = rhs({y.phi + h * k3.phi, y.psi + h * k3.psi}, p);
    return {y.phi + h / 6.0 * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi),
            y.psi + h / 6.0 * (k1.psi + 2 * k2.psi + 2 * k3.psi + k4.psi)};
}

// +1: undershoot (turned around while positive), -1: overshoot (crossed zero)
int classify_shot(double a, double p, double step, double xmax) {
    OdeState y{a, 0.0};
    for (double x = 0.0; x < xmax; x += step) {
        y = rk4_step(y, step, p);
        if (y.phi <= 0.0) return -1;
        if (y.psi > 0.0 && y.phi < 0.9 * a) return +1;
        if (y.phi < 1e-13 * a) break;
    }
    return 0;
}

} // namespace

double ShootingProfile::operator()(double x) const {
    const double ax = std::abs(x);
    const double idxf = ax / step;
    const std::size_t i = static_cast<std::size_t>(idxf);
    if (i + 1 < values.size()) {
        const double f = idxf - static_cast<double>(i);
        return (1.0 - f) * values[i] + f * values[i + 1];
    }
    // exponential tail: phi ~ phi(X) e^-(x-X)
    if (values.empty()) return 0.0;
    const double xe = step * static_cast<double>(values.size() - 1);
    return values.back() * std::exp(-(ax - xe));
}

ShootingProfile shoot_ground_state_1d(double p, double ode_step) {
    if (!(p > 1.0)) throw ValidationError("shoot_ground_state_1d: requires p > 1");
    const double xmax = 30.0;

    // bracket around the energy-level amplitude ((p+1)/2)^(1/(p-1)); the
    // bisection itself never uses that value as an answer
    double lo = 1.0 + 1e-12, hi = 1.0;
    while (classify_shot(hi, p, ode_step * 4.0, xmax) >= 0) {
        hi *= 1.5;
        if (hi > 1e6) throw SolverError("shoot_ground_state_1d: no overshoot bracket");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (classify_shot(mid, p, ode_step, xmax) < 0) hi = mid;
        else lo = mid;
    }
    const double a = 0.5 * (lo + hi);

    ShootingProfile prof;
    prof.amplitude = a;
    prof.p = p;
    prof.step = ode_step;
    prof.values.reserve(static_cast<std::size_t>(xmax / ode_step) + 2);
    prof.values.push_back(a);
    OdeState y{a, 0.0};
    double mass = a * a; // trapezoid accumulation of phi^2, both half-lines
    for (double x = 0.0; x < xmax; x += ode_step) {
        y = rk4_step(y, ode_step, p);
        // departure from the stable manifold: freeze into the exponential tail
        if (y.phi <= 0.0 || y.psi > 0.0 || y.phi < 1e-12 * a) break;
        prof.values.push_back(y.phi);
        mass += 2.0 * y.phi * y.phi;
    }
    prof.mass = mass * ode_step; // int over the whole line (even symmetry)
    return prof;
}

Field nls_ground_state_1d(const Domain& domain, double beta, double c, double p,
                          const ShootingProfile& phi) {
    if (domain.dim != 1)
        throw ValidationError("nls_ground_state_1d: 1D domains only");
    if (!(beta > 0.0) || !(c > 0.0))
        throw ValidationError("nls_ground_state_1d: beta and C must be > 0");
    const double amp = std::pow(beta / c, 1.0 / (p - 1.0));
    const double sb = std::sqrt(beta);
    Field v(domain);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = amp * phi(sb * domain.cell_center(static_cast<int>(i)));
    return v;
}

double nls_beta_from_mass_1d(double mass, double c, double p,
                             const ShootingProfile& phi) {
    if (!(mass > 0.0)) throw ValidationError("nls_beta_from_mass_1d: mass must be > 0");
    // integral v^2 = (beta/C)^(2/(p-1)) beta^(-1/2) * integral phi^2
    const double ex = 2.0 / (p - 1.0) - 0.5;
    if (std::abs(ex) < 1e-12)
        throw ValidationError("nls_beta_from_mass_1d: mass is scale-invariant at the "
                              "mass-critical exponent p = 5");
    return std::pow(mass * std::pow(c, 2.0 / (p - 1.0)) / phi.mass, 1.0 / ex);
}

GradientFlowResult nls_ground_state_2d(const Domain& domain, double beta, double c,
                                       double p, double tol, int max_iters) {
    if (domain.dim != 2)
        throw ValidationError("nls_ground_state_2d: 2D domains only");
    if (!(beta > 0.0) || !(c > 0.0))
        throw ValidationError("nls_ground_state_2d: beta and C must be > 0");

    const int N = domain.points_per_axis;
    const std::size_t n = domain.cell_count();
    const double h = domain.spacing();
    const double invh2 = 1.0 / (h * h);
    const double tau = 0.5 / beta;

    // (I - tau Lap), no-flux; SPD, factorized once
    using Trip = Eigen::Triplet<double>;
    std::vector<Trip> trips;
    trips.reserve(n * 5);
    for (int iy = 0; iy < N; ++iy)
        for (int ix = 0; ix < N; ++ix) {
            const int i = iy * N + ix;
            double diag = 1.0;
            auto nb = [&](int j) {
                trips.emplace_back(i, j, -tau * invh2);
                diag += tau * invh2;
            };
            if (ix > 0) nb(i - 1);
            if (ix < N - 1) nb(i + 1);
            if (iy > 0) nb(i - N);
            if (iy < N - 1) nb(i + N);
            trips.emplace_back(i, i, diag);
        }
    Eigen::SparseMatrix<double> A(static_cast<long>(n), static_cast<long>(n));
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(A);
    if (llt.info() != Eigen::Success)
        throw SolverError("nls_ground_state_2d: diffusion factorization failed");

    Field v(domain);
    double x[2];
    for (std::size_t i = 0; i < n; ++i) {
        domain.coords(i, x);
        v[i] = std::exp(-beta * (x[0] * x[0] + x[1] * x[1]) / 4.0);
    }

    auto nehari_rescale = [&](Field& f) {
        Field lap = laplacian(f);
        double grad2 = 0.0, f2 = 0.0, fp1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            grad2 += -f[i] * lap[i];
            f2 += f[i] * f[i];
            fp1 += std::pow(std::abs(f[i]), p + 1.0);
        }
        if (!(fp1 > 0.0)) throw SolverError("nls_ground_state_2d: flow collapsed");
        const double sigma =
            std::pow((grad2 + beta * f2) / (c * fp1), 1.0 / (p - 1.0));
        for (double& y : f.values) y *= sigma;
    };
    nehari_rescale(v);

    GradientFlowResult out;
    Eigen::VectorXd rhs(static_cast<long>(n)), sol(static_cast<long>(n));
    for (int it = 0; it < max_iters; ++it) {
        for (std::size_t i = 0; i < n; ++i)
            rhs[static_cast<long>(i)] =
                v[i] + tau * (c * std::pow(std::abs(v[i]), p - 1.0) * v[i] - beta * v[i]);
        sol = llt.solve(rhs);
        for (std::size_t i = 0; i < n; ++i) v[i] = std::max(sol[static_cast<long>(i)], 0.0);
        nehari_rescale(v);

        Field lap = laplacian(v);
        double res = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            res = std::max(res, std::abs(-lap[i] + beta * v[i] -
                                         c * std::pow(std::abs(v[i]), p - 1.0) * v[i]));
            scale = std::max(scale, beta * std::abs(v[i]));
        }
        out.residual = res / std::max(scale, 1e-300);
        out.iterations = it + 1;
        if (out.residual < tol) {
            out.converged = true;
            break;
        }
    }
    out.v = std::move(v);
    return out;
}

} // namespace mfgs
