#include "mfgs/errors.hpp"
#include "mfgs/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <vector>

namespace mfgs {

namespace {

// Bernoulli function z / (e^z - 1), stable across the whole range.
double bernoulli(double z) {
    if (std::abs(z) < 1e-10) return 1.0 - z / 2.0 + z * z / 12.0;
    const double d = std::expm1(z);
    if (std::isinf(d)) return 0.0;
    return z / d;
}

} // namespace

VectorField derived_drift(const Field& u, const Field& m, const HamiltonianSpec& ham) {
    VectorField gu = gradient(u);
    VectorField w(u.domain);
    const int dim = u.domain.dim;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double p[2] = {gu.comp[0][i], dim == 2 ? gu.comp[1][i] : 0.0};
        double g[2] = {0.0, 0.0};
        grad_h(ham, std::span<const double>(p, dim), std::span<double>(g, dim));
        for (int a = 0; a < dim; ++a) w.comp[a][i] = -m[i] * g[a];
    }
    return w;
}

Field solve_fp_stationary(const Field& u, const HamiltonianSpec& ham) {
    const Domain& d = u.domain;
    d.validate();
    ham.validate();
    if (d.boundary != Boundary::NoFlux)
        throw ValidationError("solve_fp_stationary: requires a no-flux domain");
    for (double v : u.values)
        if (!std::isfinite(v)) throw ValidationError("solve_fp_stationary: non-finite u");

    const int N = d.points_per_axis;
    const std::size_t n = d.cell_count();
    const double h = d.spacing();
    const double invh2 = 1.0 / (h * h);

    // Cell-centered gradient, used only for the tangential face component.
    VectorField gu = gradient(u);

    using Trip = Eigen::Triplet<double>;
    std::vector<Trip> trips;
    trips.reserve(n * 5 + n);

    // face drift: normal component of grad H at the face midpoint
    auto face_drift = [&](std::size_t left, std::size_t right, int ax) {
        double p[2];
        p[ax] = (u[right] - u[left]) / h;
        if (d.dim == 2) {
            const int other = 1 - ax;
            p[other] = 0.5 * (gu.comp[other][left] + gu.comp[other][right]);
        }
        double g[2] = {0.0, 0.0};
        grad_h(ham, std::span<const double>(p, d.dim), std::span<double>(g, d.dim));
        return g[ax];
    };

    // Flux on the face L->R with drift b: J = (1/h) [B(-bh) m_R - B(bh) m_L].
    // Row 0 is replaced by the quadrature row (the rows of the raw operator sum
    // to zero, so no information is lost) to pin the kernel element with unit
    // mass.
    auto add_face = [&](std::size_t left, std::size_t right, int ax) {
        const double z = face_drift(left, right, ax) * h;
        const double bm = bernoulli(-z) * invh2;
        const double bp = bernoulli(z) * invh2;
        if (left != 0) {
            trips.emplace_back(static_cast<int>(left), static_cast<int>(right), bm);
            trips.emplace_back(static_cast<int>(left), static_cast<int>(left), -bp);
        }
        if (right != 0) {
            trips.emplace_back(static_cast<int>(right), static_cast<int>(right), -bm);
            trips.emplace_back(static_cast<int>(right), static_cast<int>(left), bp);
        }
    };

    if (d.dim == 1) {
        for (int i = 0; i + 1 < N; ++i)
            add_face(static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1), 0);
    } else {
        for (int iy = 0; iy < N; ++iy)
            for (int ix = 0; ix + 1 < N; ++ix)
                add_face(static_cast<std::size_t>(iy) * N + ix,
                         static_cast<std::size_t>(iy) * N + ix + 1, 0);
        for (int iy = 0; iy + 1 < N; ++iy)
            for (int ix = 0; ix < N; ++ix)
                add_face(static_cast<std::size_t>(iy) * N + ix,
                         static_cast<std::size_t>(iy + 1) * N + ix, 1);
    }
    const double vol = d.cell_volume();
    for (std::size_t j = 0; j < n; ++j)
        trips.emplace_back(0, static_cast<int>(j), vol);

    Eigen::SparseMatrix<double> A(static_cast<long>(n), static_cast<long>(n));
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
        throw SolverError("solve_fp_stationary: singular discrete operator");

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<long>(n));
    rhs[0] = 1.0;
    Eigen::VectorXd sol = lu.solve(rhs);

    Field m(d);
    double mmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = sol[static_cast<long>(i)];
        mmax = std::max(mmax, std::abs(m[i]));
    }
    double mmin = 0.0;
    for (double v : m.values) mmin = std::min(mmin, v);
    if (mmin < -1e-14 * mmax)
        throw SolverError("solve_fp_stationary: scheme violation, negative density " +
                          std::to_string(mmin));
    for (double& v : m.values) v = std::max(v, 0.0);

    const double mass = integrate(m);
    if (!(mass > 0.0))
        throw SolverError("solve_fp_stationary: vanishing mass");
    for (double& v : m.values) v /= mass;
    return m;
}

} // namespace mfgs
