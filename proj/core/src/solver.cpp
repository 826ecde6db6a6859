#include "mfgs/errors.hpp"
#include "mfgs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>

namespace mfgs {

void SolverConfig::validate() const {
    if (!(damping > 0.0) || damping > 1.0)
        throw ValidationError("solver: damping must lie in (0,1]");
    if (!(hjb_pseudo_time_step > 0.0))
        throw ValidationError("solver: hjb_pseudo_time_step must be > 0");
    if (!(fixed_point_tol > 0.0) || !(multiplier_tol > 0.0))
        throw ValidationError("solver: tolerances must be > 0");
    if (max_outer_iters < 1 || hjb_max_steps < 1)
        throw ValidationError("solver: iteration limits must be >= 1");
    if (delta_schedule.empty())
        throw ValidationError("solver: delta schedule must be non-empty");
    if (delta_schedule.front() >= 1.0)
        throw ValidationError("solver: delta schedule must start below 1");
    for (std::size_t i = 1; i < delta_schedule.size(); ++i)
        if (!(delta_schedule[i] < delta_schedule[i - 1]))
            throw ValidationError("solver: delta schedule must be strictly decreasing");
    if (delta_schedule.back() < 0.0)
        throw ValidationError("solver: delta schedule must end at >= 0");
}

void write_iteration_csv(const std::string& path, const SolveLog& log) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << "iter,delta,mu,lambda_residual,m_change,energy\n";
    char buf[160];
    for (const auto& r : log.iterations) {
        std::snprintf(buf, sizeof buf, "%d,%.12g,%.17g,%.6g,%.6g,%.17g\n", r.iter,
                      r.delta, r.mu, r.lambda_residual, r.m_change, r.energy);
        os << buf;
    }
    if (!os) throw IoError("write failed: " + path);
}

namespace {

double lp_normalize(Field& m, double p) {
    const double nrm = lp_norm(m, p);
    if (!(nrm > 0.0)) throw SolverError("solver: vanishing density norm");
    for (double& v : m.values) v /= nrm;
    return nrm;
}

struct MuState {
    double mu;
    std::optional<std::pair<double, double>> lo; // (mu, lambda>0)
    std::optional<std::pair<double, double>> hi; // (mu, lambda<0)
};

// lambda(mu) is decreasing: raising mu lowers the HJB right-hand side.
// Secant step kept inside the bracket once one exists, bisection fallback.
double next_mu(const MuState& st, double lambda, double mass) {
    if (st.lo && st.hi) {
        const auto [xa, fa] = *st.lo;
        const auto [xb, fb] = *st.hi;
        double prop = xa - fa * (xb - xa) / (fb - fa);
        if (!(prop > std::min(xa, xb)) || !(prop < std::max(xa, xb)))
            prop = 0.5 * (xa + xb);
        return prop;
    }
    // slope estimate d lambda / d mu ~ -1/integral(m)
    double prop = st.mu + lambda * mass;
    if (!(prop > 0.0)) prop = 0.5 * st.mu;
    return prop;
}

/// One stage of the auxiliary system at fixed delta >= 0.
SolutionTriple solve_stage(const ProblemSpec& problem, const SolverConfig& config,
                           double delta, const SolutionTriple* warm, SolveLog* log) {
    const Domain& d = problem.domain;
    const HamiltonianSpec& ham = problem.hamiltonian;
    const double alpha = problem.alpha;
    const double p_norm = 1.0 + alpha;

    Field vfield = potential_field(problem.potential, d);

    Field m(d), u(d, 0.0);
    double mu;
    if (warm) {
        m = warm->m;
        u = warm->u;
        mu = warm->multiplier;
    } else {
        double x[2];
        for (std::size_t i = 0; i < m.size(); ++i) {
            d.coords(i, x);
            double r2 = x[0] * x[0] + (d.dim == 2 ? x[1] * x[1] : 0.0);
            m[i] = std::exp(-r2);
        }
        lp_normalize(m, p_norm);
        // seed: energy of the initial iterate with w = 0
        double s = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i)
            s += (delta * vfield[i] + 1.0) * m[i];
        mu = d.cell_volume() * s;
    }

    lp_normalize(m, p_norm);

    double theta = config.damping;
    Field dm_prev;
    bool have_dm_prev = false;
    int oscillations = 0;
    double lambda = 0.0;
    double last_m_change = std::numeric_limits<double>::infinity();
    bool converged = false;

    for (int k = 0; k < config.max_outer_iters; ++k) {
        // (a)-(c): with m fixed, drive the ergodic constant of
        //   -Lap u + H(grad u) + lambda = delta V + 1 - mu m^alpha
        // to zero in mu (secant inside a bracket, bisection fallback).
        Field m_alpha(d);
        for (std::size_t i = 0; i < m.size(); ++i)
            m_alpha[i] = std::pow(m[i], alpha);
        const double mass = integrate(m);

        MuState st{mu, {}, {}};
        for (int j = 0; j < 40; ++j) {
            Field rhs(d);
            for (std::size_t i = 0; i < rhs.size(); ++i)
                rhs[i] = delta * vfield[i] + 1.0 - st.mu * m_alpha[i];
            HjbResult hr = solve_hjb_ergodic(rhs, ham, config, &u);
            u = std::move(hr.u);
            lambda = hr.lambda;
            if (std::abs(lambda) < config.multiplier_tol) break;
            if (lambda > 0.0) st.lo = {st.mu, lambda};
            else st.hi = {st.mu, lambda};
            const double prop = next_mu(st, lambda, mass);
            if (std::abs(prop - st.mu) < 1e-16 * std::max(1.0, std::abs(st.mu))) break;
            st.mu = prop;
        }
        mu = st.mu;

        // (d): Fokker-Planck solve, renormalize, damped update
        Field m_new = solve_fp_stationary(u, ham);
        lp_normalize(m_new, p_norm);
        Field m_next(d);
        for (std::size_t i = 0; i < m.size(); ++i)
            m_next[i] = (1.0 - theta) * m[i] + theta * m_new[i];
        lp_normalize(m_next, p_norm);

        Field dm(d);
        double m_change = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            dm[i] = m_next[i] - m[i];
            m_change = std::max(m_change, std::abs(dm[i]));
        }

        if (log) {
            FlowPair pr{m, derived_drift(u, m, ham)};
            ProblemSpec stage_problem = problem;
            stage_problem.delta = delta;
            KineticValue en = energy_delta(pr, stage_problem);
            log->iterations.push_back(
                {k, delta, mu, std::abs(lambda), m_change, en.value});
        }

        if (have_dm_prev) {
            double n1 = 0.0, n0 = 0.0, dot = 0.0;
            for (std::size_t i = 0; i < dm.size(); ++i) {
                n1 += dm[i] * dm[i];
                n0 += dm_prev[i] * dm_prev[i];
                dot += dm[i] * dm_prev[i];
            }
            n1 = std::sqrt(n1);
            n0 = std::sqrt(n0);
            const double cosang = (n0 > 0 && n1 > 0) ? dot / (n0 * n1) : 0.0;
            // period-2 cycle: successive updates anti-aligned
            if (cosang < -0.5) {
                if (++oscillations >= 2) {
                    theta = std::max(theta * 0.5, 0.05);
                    oscillations = 0;
                    if (log) log->oscillation_detected = true;
                }
            } else {
                oscillations = 0;
            }
            // tail acceleration: geometric extrapolation along a single
            // dominant contraction mode (signed to cover alternating modes),
            // safeguarded by alignment and a boost cap
            if ((k % 6) == 5 && n0 > 0.0 && n1 > 0.0 && std::abs(cosang) > 0.99) {
                const double rho = (cosang >= 0.0 ? 1.0 : -1.0) * n1 / n0;
                if (std::abs(rho) > 0.2 && std::abs(rho) < 0.995) {
                    const double boost = std::min(rho / (1.0 - rho), 40.0);
                    for (std::size_t i = 0; i < m_next.size(); ++i)
                        m_next[i] = std::max(m_next[i] + boost * dm[i], 0.0);
                    lp_normalize(m_next, p_norm);
                }
            }
        }
        dm_prev = std::move(dm);
        have_dm_prev = true;
        m = std::move(m_next);
        last_m_change = m_change;

        if (m_change < config.fixed_point_tol && std::abs(lambda) < config.multiplier_tol) {
            converged = true;
            break;
        }
    }

    if (!converged)
        throw SolverError("solver stage at delta=" + std::to_string(delta) +
                              " did not converge in " +
                              std::to_string(config.max_outer_iters) +
                              " outer iterations" +
                              (theta < config.damping
                                   ? " (oscillation detected; damping was reduced to " +
                                         std::to_string(theta) + ", consider a smaller value)"
                                   : ""),
                          last_m_change);

    SolutionTriple sol;
    sol.alpha = alpha;
    sol.hamiltonian = ham;
    sol.mode = MassMode::L1PlusAlpha;
    sol.u = std::move(u);
    sol.m = std::move(m);
    sol.w = derived_drift(sol.u, sol.m, ham);
    sol.multiplier = mu;
    sol.lambda_residual = std::abs(lambda);
    sol.tail_mass = tail_mass_fraction(sol.m);

    ProblemSpec stage_problem = problem;
    stage_problem.delta = delta;
    KineticValue en = energy_delta(sol.pair(), stage_problem);
    sol.energy_consistency =
        en.infinite ? std::numeric_limits<double>::infinity()
                    : std::abs(sol.multiplier - en.value) / std::max(1e-300, std::abs(sol.multiplier));

    if (log) {
        if (sol.tail_mass > 1e-6) log->boundary_mass_warning = true;
        if (sol.tail_mass > 1e-8) log->domain_small_diagnostic = true;
    }
    return sol;
}

} // namespace

SolutionTriple solve_auxiliary_delta(const ProblemSpec& problem,
                                     const SolverConfig& config,
                                     const SolutionTriple* warm_start, SolveLog* log) {
    problem.validate();
    config.validate();
    if (!(problem.delta > 0.0))
        throw ValidationError("solve_auxiliary_delta: requires delta > 0");
    if (!problem.potential.coercive())
        throw ValidationError("solve_auxiliary_delta: requires a coercive potential");
    SolutionTriple sol = solve_stage(problem, config, problem.delta, warm_start, log);
    if (sol.lambda_residual >= config.multiplier_tol)
        throw SolverError("solve_auxiliary_delta: multiplier iteration did not converge",
                          sol.lambda_residual);
    if (log)
        log->stages.push_back({problem.delta, sol.multiplier,
                               log->iterations.empty() ? 0 : log->iterations.back().iter + 1,
                               sol.tail_mass});
    return sol;
}

namespace {

void recenter_triple(SolutionTriple& sol) {
    const Domain& d = sol.m.domain;
    const int N = d.points_per_axis;
    std::size_t best = 0;
    for (std::size_t i = 1; i < sol.m.size(); ++i)
        if (sol.m[i] > sol.m[best]) best = i;
    const int c = d.center_index_1d();
    std::array<int, 2> shift{0, 0};
    shift[0] = c - static_cast<int>(best % N);
    if (d.dim == 2) shift[1] = c - static_cast<int>(best / N);
    if (shift[0] == 0 && shift[1] == 0) return;
    sol.m = shift_field(sol.m, shift);
    sol.u = shift_field(sol.u, shift);
}

} // namespace

SolutionTriple continue_delta_to_zero(const ProblemSpec& problem,
                                      const SolverConfig& config, SolveLog* log,
                                      const StageObserver& on_stage) {
    problem.validate();
    config.validate();
    if (config.delta_schedule.back() != 0.0)
        throw ValidationError("continue_delta_to_zero: schedule must end at 0");
    if (!problem.potential.coercive() && config.delta_schedule.size() > 1)
        throw ValidationError("continue_delta_to_zero: requires a coercive potential");

    SolutionTriple sol;
    bool have_warm = false;
    double last_good_delta = config.delta_schedule.front();
    for (std::size_t stage = 0; stage < config.delta_schedule.size(); ++stage) {
        const double delta = config.delta_schedule[stage];
        // the discrete analog of the translation in the concentration argument:
        // shift the incoming iterate's density peak to the origin (whole cells)
        if (have_warm && config.recenter) recenter_triple(sol);
        const int first_iter = log ? static_cast<int>(log->iterations.size()) : 0;
        SolutionTriple next;
        try {
            next = solve_stage(problem, config, delta, have_warm ? &sol : nullptr, log);
        } catch (const SolverError& e) {
            throw SolverError("continuation failed at delta=" + std::to_string(delta) +
                                  " (last good stage delta=" +
                                  std::to_string(last_good_delta) + "): " + e.what(),
                              e.last_residual());
        }
        sol = std::move(next);
        if (log) {
            const int iters = static_cast<int>(log->iterations.size()) - first_iter;
            log->stages.push_back({delta, sol.multiplier, iters, sol.tail_mass});
        }
        if (on_stage) on_stage(static_cast<int>(stage), delta, sol);
        have_warm = true;
        last_good_delta = delta;
    }
    return sol;
}

} // namespace mfgs
