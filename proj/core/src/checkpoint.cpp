#include "mfgs/checkpoint.hpp"

#include "mfgs/errors.hpp"
#include "mfgs/field_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mfgs {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::vector<std::string> save_triple(const std::string& dir, const SolutionTriple& sol) {
    std::filesystem::create_directories(dir);
    const std::string u_path = dir + "/u.fld";
    const std::string m_path = dir + "/m.fld";
    const std::string w_path = dir + "/w.fld";
    const std::string t_path = dir + "/triple.txt";
    write_field(u_path, sol.u);
    write_field(m_path, sol.m);
    write_field(w_path, sol.w);

    std::ofstream os(t_path);
    if (!os) throw IoError("cannot open for writing: " + t_path);
    os << "multiplier = " << fmt(sol.multiplier) << "\n"
       << "lambda_residual = " << fmt(sol.lambda_residual) << "\n"
       << "alpha = " << fmt(sol.alpha) << "\n"
       << "mass_mode = " << to_string(sol.mode) << "\n"
       << "tail_mass = " << fmt(sol.tail_mass) << "\n"
       << "energy_consistency = " << fmt(sol.energy_consistency) << "\n"
       << "hamiltonian.kind = "
       << (sol.hamiltonian.kind == HamiltonianKind::IsotropicPower ? "isotropic-power"
                                                                   : "anisotropic-sum")
       << "\n"
       << "hamiltonian.gamma = " << fmt(sol.hamiltonian.gamma) << "\n"
       << "hamiltonian.coefficients = ";
    for (std::size_t i = 0; i < sol.hamiltonian.coefficients.size(); ++i)
        os << (i ? "," : "") << fmt(sol.hamiltonian.coefficients[i]);
    os << "\n";
    if (!os) throw IoError("write failed: " + t_path);
    return {u_path, m_path, w_path, t_path};
}

SolutionTriple load_triple(const std::string& dir) {
    SolutionTriple sol;
    sol.u = read_field(dir + "/u.fld");
    sol.m = read_field(dir + "/m.fld");
    sol.w = read_vector_field(dir + "/w.fld");
    if (!(sol.u.domain == sol.m.domain))
        throw IoError(dir + ": u.fld and m.fld domains disagree");

    std::ifstream is(dir + "/triple.txt");
    if (!is) throw IoError("cannot open: " + dir + "/triple.txt");
    std::string line;
    while (std::getline(is, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "multiplier") sol.multiplier = std::stod(val);
        else if (key == "lambda_residual") sol.lambda_residual = std::stod(val);
        else if (key == "alpha") sol.alpha = std::stod(val);
        else if (key == "mass_mode") sol.mode = mass_mode_from_string(val);
        else if (key == "tail_mass") sol.tail_mass = std::stod(val);
        else if (key == "energy_consistency") sol.energy_consistency = std::stod(val);
        else if (key == "hamiltonian.kind")
            sol.hamiltonian.kind = (val == "isotropic-power")
                                       ? HamiltonianKind::IsotropicPower
                                       : HamiltonianKind::AnisotropicSum;
        else if (key == "hamiltonian.gamma") sol.hamiltonian.gamma = std::stod(val);
        else if (key == "hamiltonian.coefficients") {
            sol.hamiltonian.coefficients.clear();
            std::stringstream ss(val);
            std::string item;
            while (std::getline(ss, item, ','))
                sol.hamiltonian.coefficients.push_back(std::stod(item));
        }
    }
    sol.hamiltonian.validate();
    return sol;
}

} // namespace mfgs
