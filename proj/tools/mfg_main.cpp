// Batch front-end: one subcommand per module pipeline, CSV/.fld outputs, and a
// manifest (inputs, version, output hashes) per run.
//
// Exit codes: 0 ok, 1 solver failure, 2 validation, 3 I/O.

#include <CLI11.hpp>

#include "mfgs/checkpoint.hpp"
#include "mfgs/config.hpp"
#include "mfgs/errors.hpp"
#include "mfgs/field_io.hpp"
#include "mfgs/functionals.hpp"
#include "mfgs/scaling.hpp"
#include "mfgs/solver.hpp"
#include "mfgs/verify.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace mfgs;

struct CliOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::string checkpoint;
    double mass = 1.0;
    bool mass_set = false;
    std::string trange = "0.1:10:50";
    double r0 = 0.0;
    double e0_override = 0.0;
    bool no_oracle = false;
};

void ensure_outdir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << text;
    if (!os) throw IoError("write failed: " + path);
}

std::string summary_of(const SolutionTriple& sol, const ProblemSpec& problem,
                       const SolveLog& log) {
    std::string s;
    s += "multiplier = " + fmt(sol.multiplier) + "\n";
    s += "lambda_residual = " + fmt(sol.lambda_residual) + "\n";
    s += "energy_consistency = " + fmt(sol.energy_consistency) + "\n";
    s += "tail_mass = " + fmt(sol.tail_mass) + "\n";
    FlowPair pr = sol.pair();
    KineticValue e0v = energy_zero(pr, problem.hamiltonian);
    KineticValue jv = j_zero(pr, problem.hamiltonian, sol.alpha);
    s += "energy_zero = " + fmt(e0v.value) + "\n";
    s += "j_zero = " + fmt(jv.value) + "\n";
    s += "mass_l1 = " + fmt(integrate(sol.m)) + "\n";
    s += "norm_l1plusalpha = " + fmt(lp_norm(sol.m, 1.0 + sol.alpha)) + "\n";
    for (const auto& st : log.stages)
        s += "e_delta[" + fmt(st.delta) + "] = " + fmt(st.e_delta) + "\n";
    if (log.boundary_mass_warning)
        s += "warning = boundary mass fraction above 1e-6; enlarge the domain\n";
    else if (log.domain_small_diagnostic)
        s += "diagnostic = boundary mass fraction above 1e-8\n";
    return s;
}

int cmd_solve_aux(const CliOptions& opt) {
    RunConfig cfg = load_run_config(opt.config_path);
    cfg.validate();
    if (!(cfg.problem.delta > 0.0))
        throw ValidationError("solve-aux requires problem.delta > 0");
    ensure_outdir(opt.out_dir);

    SolveLog log;
    SolutionTriple sol = solve_auxiliary_delta(cfg.problem, cfg.solver, nullptr, &log);

    std::vector<std::string> outputs = save_triple(opt.out_dir, sol);
    const std::string iter_csv = opt.out_dir + "/iterations.csv";
    write_iteration_csv(iter_csv, log);
    outputs.push_back(iter_csv);
    const std::string summary = opt.out_dir + "/summary.txt";
    write_text(summary, summary_of(sol, cfg.problem, log));
    outputs.push_back(summary);
    write_manifest(opt.out_dir + "/manifest.txt", "solve-aux", {opt.config_path}, outputs);
    std::cout << "mu_delta = " << fmt(sol.multiplier)
              << " (energy consistency " << fmt(sol.energy_consistency) << ")\n";
    return 0;
}

int cmd_solve_free(const CliOptions& opt) {
    RunConfig cfg = load_run_config(opt.config_path);
    cfg.validate();
    ensure_outdir(opt.out_dir);

    SolveLog log;
    std::vector<std::string> outputs;
    auto on_stage = [&](int idx, double delta, const SolutionTriple& st) {
        char base[64];
        std::snprintf(base, sizeof base, "%s/stage%02d", opt.out_dir.c_str(), idx);
        write_field(std::string(base) + "_u.fld", st.u);
        write_field(std::string(base) + "_m.fld", st.m);
        outputs.push_back(std::string(base) + "_u.fld");
        outputs.push_back(std::string(base) + "_m.fld");
        std::cout << "stage " << idx << ": delta = " << fmt(delta)
                  << ", e_delta = " << fmt(st.multiplier) << "\n";
    };
    SolutionTriple sol = continue_delta_to_zero(cfg.problem, cfg.solver, &log, on_stage);

    auto files = save_triple(opt.out_dir, sol);
    outputs.insert(outputs.end(), files.begin(), files.end());
    const std::string iter_csv = opt.out_dir + "/iterations.csv";
    write_iteration_csv(iter_csv, log);
    outputs.push_back(iter_csv);
    const std::string summary = opt.out_dir + "/summary.txt";
    write_text(summary, summary_of(sol, cfg.problem, log));
    outputs.push_back(summary);
    write_manifest(opt.out_dir + "/manifest.txt", "solve-free", {opt.config_path}, outputs);
    std::cout << "e0 = " << fmt(sol.multiplier) << "\n";
    return 0;
}

int cmd_scale(const CliOptions& opt) {
    RunConfig cfg = load_run_config(opt.config_path);
    SolutionTriple sol = load_triple(opt.checkpoint);
    ensure_outdir(opt.out_dir);
    const double mass = opt.mass_set ? opt.mass : cfg.problem.mass;

    SolutionTriple scaled = scale_to_mass(sol, mass);
    std::vector<std::string> outputs = save_triple(opt.out_dir, scaled);

    const double gp = sol.hamiltonian.gamma_prime();
    const int n = sol.m.domain.dim;
    std::vector<FunctionalRow> rows;
    const int grid_n = scaled.m.domain.points_per_axis;
    rows.push_back({"lambda_hat", scaled.multiplier, sol.alpha, sol.hamiltonian.gamma, 0.0, grid_n});
    rows.push_back({"mass_l1", integrate(scaled.m), sol.alpha, sol.hamiltonian.gamma, 0.0, grid_n});
    FlowPair pr = scaled.pair();
    rows.push_back({"j_zero", j_zero(pr, sol.hamiltonian, sol.alpha).value, sol.alpha,
                    sol.hamiltonian.gamma, 0.0, grid_n});
    rows.push_back({"gn_quotient", gn_quotient(pr, sol.hamiltonian, sol.alpha), sol.alpha,
                    sol.hamiltonian.gamma, 0.0, grid_n});
    if (n * sol.alpha > gp)
        rows.push_back({"e_mp_formula",
                        mountain_pass_level(sol.alpha, gp, n, sol.multiplier, mass),
                        sol.alpha, sol.hamiltonian.gamma, 0.0, grid_n});
    const std::string csv = opt.out_dir + "/report.csv";
    write_functional_csv(csv, rows);
    outputs.push_back(csv);
    write_manifest(opt.out_dir + "/manifest.txt", "scale",
                   {opt.config_path, opt.checkpoint}, outputs);
    std::cout << "scaled to mass " << fmt(mass) << ", lambda = " << fmt(scaled.multiplier)
              << "\n";
    return 0;
}

int cmd_gn(const CliOptions& opt) {
    RunConfig cfg = load_run_config(opt.config_path);
    SolutionTriple sol = load_triple(opt.checkpoint);
    ensure_outdir(opt.out_dir);
    const double gp = sol.hamiltonian.gamma_prime();
    const int n = sol.m.domain.dim;
    if (sol.mode != MassMode::L1PlusAlpha)
        throw ValidationError("gn expects an L^(1+alpha)-mode checkpoint (e0 = multiplier)");

    const double gamma_formula = gn_constant_from_e0(sol.alpha, gp, n, sol.multiplier);
    const double quotient = gn_quotient(sol.pair(), sol.hamiltonian, sol.alpha);
    const int grid_n = sol.m.domain.points_per_axis;
    std::vector<FunctionalRow> rows{
        {"gamma_alpha_formula", gamma_formula, sol.alpha, sol.hamiltonian.gamma, 0.0, grid_n},
        {"gn_quotient", quotient, sol.alpha, sol.hamiltonian.gamma, 0.0, grid_n},
        {"relative_difference", std::abs(gamma_formula - quotient) / gamma_formula,
         sol.alpha, sol.hamiltonian.gamma, 0.0, grid_n},
        {"e0", sol.multiplier, sol.alpha, sol.hamiltonian.gamma, 0.0, grid_n}};
    const std::string csv = opt.out_dir + "/gn.csv";
    write_functional_csv(csv, rows);
    write_manifest(opt.out_dir + "/manifest.txt", "gn", {opt.config_path, opt.checkpoint},
                   {csv});
    std::cout << "Gamma_alpha (formula) = " << fmt(gamma_formula)
              << "\nGamma_alpha (quotient) = " << fmt(quotient) << "\n";
    static_cast<void>(cfg);
    return 0;
}

int cmd_classify(const CliOptions& opt) {
    RunConfig cfg = load_run_config(opt.config_path);
    RegimeReport rep = classify(cfg.problem.alpha, cfg.problem.hamiltonian.gamma,
                                cfg.problem.domain.dim);
    if (opt.e0_override > 0.0) {
        rep.e0 = opt.e0_override;
        rep.gamma_alpha = gn_constant_from_e0(rep.alpha, rep.gamma_prime, rep.n, *rep.e0);
        if (rep.regime == Regime::Critical) {
            rep.m_star = critical_mass(*rep.gamma_alpha, rep.alpha_star);
            rep.lambda_critical = critical_multiplier(*rep.m_star, rep.gamma_prime, rep.n);
        }
        if (rep.regime == Regime::Supercritical)
            rep.e_mp = mountain_pass_level(rep.alpha, rep.gamma_prime, rep.n, *rep.e0,
                                           cfg.problem.mass);
    }
    ensure_outdir(opt.out_dir);
    const std::string txt = opt.out_dir + "/classify.txt";
    write_text(txt, rep.to_text());
    const std::string csv = opt.out_dir + "/classify.csv";
    write_text(csv, RegimeReport::csv_header() + "\n" + rep.to_csv_row() + "\n");
    write_manifest(opt.out_dir + "/manifest.txt", "classify", {opt.config_path}, {txt, csv});
    std::cout << rep.to_text();
    return 0;
}

int cmd_verify(const CliOptions& opt) {
    RunConfig cfg = load_run_config(opt.config_path);
    SolutionTriple sol = load_triple(opt.checkpoint);
    ensure_outdir(opt.out_dir);

    std::vector<CertificateReport> reports;
    reports.push_back(check_pohozaev(sol, sol.alpha));
    reports.push_back(check_decay(sol.m));
    reports.push_back(check_gradient_bound(sol.u, cfg.problem.potential,
                                           cfg.problem.delta,
                                           sol.hamiltonian.gamma));
    const bool quadratic = std::abs(sol.hamiltonian.gamma - 2.0) < 1e-12 &&
                           sol.hamiltonian.kind == HamiltonianKind::IsotropicPower;
    if (quadratic && !opt.no_oracle) reports.push_back(nls_oracle(sol));
    if (opt.r0 > 0.0)
        reports.push_back(geometry_probe(sol.pair(), sol.hamiltonian, sol.alpha, opt.r0));

    const std::string csv = opt.out_dir + "/certificates.csv";
    write_certificate_csv(csv, reports);
    std::string text;
    for (const auto& r : reports) text += r.to_text();
    write_text(opt.out_dir + "/certificates.txt", text);
    write_manifest(opt.out_dir + "/manifest.txt", "verify",
                   {opt.config_path, opt.checkpoint},
                   {csv, opt.out_dir + "/certificates.txt"});
    std::cout << text;
    return 0;
}

int cmd_path(const CliOptions& opt) {
    RunConfig cfg = load_run_config(opt.config_path);
    SolutionTriple sol = load_triple(opt.checkpoint);
    ensure_outdir(opt.out_dir);

    double lo = 0, hi = 0;
    int steps = 0;
    if (std::sscanf(opt.trange.c_str(), "%lf:%lf:%d", &lo, &hi, &steps) != 3 ||
        !(lo > 0.0) || !(hi > lo) || steps < 2)
        throw ValidationError("path: --trange must be LO:HI:STEPS with 0 < LO < HI");

    FlowPair pair = sol.pair();
    const std::string csv = opt.out_dir + "/path.csv";
    std::ofstream os(csv);
    if (!os) throw IoError("cannot open for writing: " + csv);
    os << "t,j_zero,pohozaev_p\n";
    for (int k = 0; k < steps; ++k) {
        const double t =
            lo * std::pow(hi / lo, static_cast<double>(k) / (steps - 1));
        FlowPair dil = dilation_path(pair, t);
        const double j = j_zero(dil, sol.hamiltonian, sol.alpha).value;
        const double p = pohozaev_p(dil, sol.hamiltonian, sol.alpha);
        os << fmt(t) << ',' << fmt(j) << ',' << fmt(p) << '\n';
    }
    os.close();
    write_manifest(opt.out_dir + "/manifest.txt", "path",
                   {opt.config_path, opt.checkpoint}, {csv});
    std::cout << "wrote " << csv << "\n";
    static_cast<void>(cfg);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    // MFG_THREADS caps internal parallelism; default 1 keeps runs bit-identical
    int threads = 1;
    if (const char* env = std::getenv("MFG_THREADS")) {
        threads = std::max(1, std::atoi(env));
    }
    Eigen::setNbThreads(threads);

    CLI::App app{"Ergodic mean-field-game solver and verification toolkit"};
    app.set_version_flag("--version", mfgs::version_string());
    app.require_subcommand(1);

    CliOptions opt;
    auto add_common = [&](CLI::App* cmd, bool needs_checkpoint) {
        cmd->add_option("--config", opt.config_path, "run configuration file")
            ->required();
        cmd->add_option("--out", opt.out_dir, "output directory");
        if (needs_checkpoint)
            cmd->add_option("--checkpoint", opt.checkpoint,
                            "solution checkpoint directory")
                ->required();
    };

    CLI::App* solve_aux = app.add_subcommand(
        "solve-aux", "solve the delta-regularized auxiliary system (delta > 0)");
    add_common(solve_aux, false);

    CLI::App* solve_free = app.add_subcommand(
        "solve-free", "continue delta -> 0 to the potential-free system");
    add_common(solve_free, false);

    CLI::App* scale = app.add_subcommand(
        "scale", "rescale an L^(1+alpha) solution to prescribed L1 mass");
    add_common(scale, true);
    scale->add_option("--mass", opt.mass, "target L1 mass")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { opt.mass_set = true; });

    CLI::App* gn = app.add_subcommand(
        "gn", "best-constant report: formula vs quotient on a checkpoint");
    add_common(gn, true);

    CLI::App* classify_cmd =
        app.add_subcommand("classify", "regime classification report");
    add_common(classify_cmd, false);
    classify_cmd->add_option("--e0", opt.e0_override,
                             "ground energy; fills Gamma_alpha / M* / e_MP");

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run solution certificates on a checkpoint");
    add_common(verify_cmd, true);
    verify_cmd->add_option("--r0", opt.r0, "mountain-pass geometry probe level");
    verify_cmd->add_flag("--no-oracle", opt.no_oracle, "skip the NLS oracle");

    CLI::App* path_cmd = app.add_subcommand(
        "path", "dilation-path sweep CSV (t, J0, P) from a checkpoint");
    add_common(path_cmd, true);
    path_cmd->add_option("--trange", opt.trange, "log-spaced range LO:HI:STEPS");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2; // bad flags are validation failures
    }

    try {
        if (solve_aux->parsed()) return cmd_solve_aux(opt);
        if (solve_free->parsed()) return cmd_solve_free(opt);
        if (scale->parsed()) return cmd_scale(opt);
        if (gn->parsed()) return cmd_gn(opt);
        if (classify_cmd->parsed()) return cmd_classify(opt);
        if (verify_cmd->parsed()) return cmd_verify(opt);
        if (path_cmd->parsed()) return cmd_path(opt);
    } catch (const mfgs::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const mfgs::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const mfgs::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
