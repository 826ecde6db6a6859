#include "mfgs/errors.hpp"
#include "mfgs/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <vector>

namespace mfgs {

namespace {

// residual of the ergodic equation together with the mean-mode multiplier
struct Residual {
    double lambda;
    double sup;
};

Residual ergodic_residual(const Field& u, const Field& rhs, const HamiltonianSpec& ham,
                          Field& h_of_grad, VectorField& gu) {
    gu = gradient(u);
    const int dim = u.domain.dim;
    double mean = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double p[2] = {gu.comp[0][i], dim == 2 ? gu.comp[1][i] : 0.0};
        h_of_grad[i] = eval_h(ham, std::span<const double>(p, dim));
        mean += rhs[i] - h_of_grad[i];
    }
    mean /= static_cast<double>(u.size());
    Field lap = laplacian(u);
    double sup = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        sup = std::max(sup, std::abs(-lap[i] + h_of_grad[i] + mean - rhs[i]));
    return {mean, sup};
}

} // namespace

HjbResult solve_hjb_ergodic(const Field& rhs, const HamiltonianSpec& ham,
                            const SolverConfig& config, const Field* warm_start) {
    const Domain& d = rhs.domain;
    d.validate();
    ham.validate();
    for (double v : rhs.values)
        if (!std::isfinite(v)) throw ValidationError("solve_hjb_ergodic: non-finite rhs");

    const int N = d.points_per_axis;
    const std::size_t n = d.cell_count();
    const double h = d.spacing();
    const double invh2 = 1.0 / (h * h);
    const double inv2h = 1.0 / (2.0 * h);
    const bool periodic = d.boundary == Boundary::Periodic;

    Field u = warm_start ? *warm_start : Field(d, 0.0);
    Field h_of_grad(d);
    VectorField gu(d);

    Residual res = ergodic_residual(u, rhs, ham, h_of_grad, gu);
    double tau = config.hjb_pseudo_time_step;
    const double tau_min = 1e-9, tau_max = 1e4;

    using Trip = Eigen::Triplet<double>;
    Eigen::SparseMatrix<double> A(static_cast<long>(n), static_cast<long>(n));
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool analyzed = false;

    std::vector<Trip> trips;
    Eigen::VectorXd rv(static_cast<long>(n)), sol(static_cast<long>(n));

    auto axis_neighbor = [&](std::size_t idx, int ax, int dir) -> long {
        // returns linear neighbor index or -1 outside (no-flux)
        const long stride = (ax == 0) ? 1 : N;
        const long i = (ax == 0) ? static_cast<long>(idx) % N : static_cast<long>(idx) / N;
        long j = i + dir;
        if (j < 0 || j >= N) {
            if (!periodic) return -1;
            j = (j + N) % N;
        }
        return static_cast<long>(idx) + (j - i) * stride;
    };

    int steps = 0;
    int rejects_in_row = 0;
    while (res.sup >= config.fixed_point_tol && steps < config.hjb_max_steps) {
        // assemble M = (1/tau) I - Lap + b . grad_c, b = grad H(grad u) frozen
        trips.clear();
        trips.reserve(n * 5);
        for (std::size_t idx = 0; idx < n; ++idx) {
            double p[2] = {gu.comp[0][idx], d.dim == 2 ? gu.comp[1][idx] : 0.0};
            double b[2] = {0.0, 0.0};
            grad_h(ham, std::span<const double>(p, d.dim), std::span<double>(b, d.dim));

            double diag = 1.0 / tau;
            for (int ax = 0; ax < d.dim; ++ax) {
                const long up = axis_neighbor(idx, ax, +1);
                const long dn = axis_neighbor(idx, ax, -1);
                // laplacian (conservative: walls contribute nothing)
                if (up >= 0) { trips.emplace_back(idx, up, -invh2); diag += invh2; }
                if (dn >= 0) { trips.emplace_back(idx, dn, -invh2); diag += invh2; }
                // centered drift with even reflection at walls
                const double c = b[ax] * inv2h;
                if (up >= 0) trips.emplace_back(idx, up, c); else diag += c;
                if (dn >= 0) trips.emplace_back(idx, dn, -c); else diag -= c;
            }
            trips.emplace_back(idx, idx, diag);
            // b . grad u = gamma H(grad u) by homogeneity
            rv[static_cast<long>(idx)] = u[idx] / tau +
                                         (ham.gamma - 1.0) * h_of_grad[idx] +
                                         rhs[idx] - res.lambda;
        }
        A.setFromTriplets(trips.begin(), trips.end());
        if (!analyzed) { lu.analyzePattern(A); analyzed = true; }
        lu.factorize(A);
        if (lu.info() != Eigen::Success)
            throw SolverError("solve_hjb_ergodic: implicit step factorization failed", res.sup);
        sol = lu.solve(rv);

        Field u1(d);
        double sup_u = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            u1[i] = sol[static_cast<long>(i)];
            sup_u = std::max(sup_u, std::abs(u1[i]));
        }
        if (!std::isfinite(sup_u) || sup_u > 1e12)
            throw SolverError("solve_hjb_ergodic: blow-up detected, reduce the pseudo-time step",
                              res.sup);

        Field h1(d);
        VectorField gu1(d);
        Residual res1 = ergodic_residual(u1, rhs, ham, h1, gu1);
        ++steps;
        if (res1.sup < res.sup || tau <= tau_min) {
            u = std::move(u1);
            h_of_grad = std::move(h1);
            gu = std::move(gu1);
            res = res1;
            tau = std::min(tau * 4.0, tau_max);
            rejects_in_row = 0;
        } else {
            tau *= 0.2;
            if (++rejects_in_row > 60)
                throw SolverError("solve_hjb_ergodic: pseudo-time step collapsed", res.sup);
        }
    }
    if (res.sup >= config.fixed_point_tol)
        throw SolverError("solve_hjb_ergodic: no convergence in " +
                              std::to_string(config.hjb_max_steps) + " steps",
                          res.sup);

    const double uc = u[d.center_index()];
    for (double& v : u.values) v -= uc;
    return {std::move(u), res.lambda, steps, res.sup};
}

} // namespace mfgs
