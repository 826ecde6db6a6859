#include "mfgs/config.hpp"

#include "mfgs/errors.hpp"
#include "mfgs/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mfgs {

const char* version_string() { return "mfg 0.1.0"; }

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError("config: bad numeric value for " + key + ": '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError("config: bad integer value for " + key + ": '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ValidationError("config: bad boolean value for " + key + ": '" + v + "'");
}

std::vector<double> to_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    if (out.empty()) throw ValidationError("config: empty list for " + key);
    return out;
}

std::string fmt_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

RunConfig parse_run_config(const std::string& text) {
    RunConfig c;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string::size_type hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string::size_type eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "problem.alpha") c.problem.alpha = to_double(key, val);
        else if (key == "problem.delta") c.problem.delta = to_double(key, val);
        else if (key == "problem.mass_mode") c.problem.mass_mode = mass_mode_from_string(val);
        else if (key == "problem.mass") c.problem.mass = to_double(key, val);
        else if (key == "hamiltonian.kind") {
            if (val == "isotropic-power") c.problem.hamiltonian.kind = HamiltonianKind::IsotropicPower;
            else if (val == "anisotropic-sum") c.problem.hamiltonian.kind = HamiltonianKind::AnisotropicSum;
            else throw ValidationError("config: unknown hamiltonian kind '" + val + "'");
        }
        else if (key == "hamiltonian.gamma") c.problem.hamiltonian.gamma = to_double(key, val);
        else if (key == "hamiltonian.coefficients")
            c.problem.hamiltonian.coefficients = to_double_list(key, val);
        else if (key == "potential.kind") c.problem.potential.kind = potential_kind_from_string(val);
        else if (key == "potential.C_V") c.problem.potential.c_v = to_double(key, val);
        else if (key == "potential.b") c.problem.potential.b = to_double(key, val);
        else if (key == "domain.dim") c.problem.domain.dim = to_int(key, val);
        else if (key == "domain.half_width") c.problem.domain.half_width = to_double(key, val);
        else if (key == "domain.points_per_axis") c.problem.domain.points_per_axis = to_int(key, val);
        else if (key == "domain.boundary") c.problem.domain.boundary = boundary_from_string(val);
        else if (key == "solver.damping") c.solver.damping = to_double(key, val);
        else if (key == "solver.hjb_pseudo_time_step") c.solver.hjb_pseudo_time_step = to_double(key, val);
        else if (key == "solver.fixed_point_tol") c.solver.fixed_point_tol = to_double(key, val);
        else if (key == "solver.multiplier_tol") c.solver.multiplier_tol = to_double(key, val);
        else if (key == "solver.max_outer_iters") c.solver.max_outer_iters = to_int(key, val);
        else if (key == "solver.hjb_max_steps") c.solver.hjb_max_steps = to_int(key, val);
        else if (key == "solver.delta_schedule") c.solver.delta_schedule = to_double_list(key, val);
        else if (key == "solver.recenter") c.solver.recenter = to_bool(key, val);
        else throw ValidationError("config: unknown key '" + key + "'");
    }
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_run_config(ss.str());
}

std::string serialize_run_config(const RunConfig& c) {
    std::ostringstream os;
    os << "problem.alpha = " << fmt_double(c.problem.alpha) << "\n";
    os << "problem.delta = " << fmt_double(c.problem.delta) << "\n";
    os << "problem.mass_mode = " << to_string(c.problem.mass_mode) << "\n";
    os << "problem.mass = " << fmt_double(c.problem.mass) << "\n";
    os << "hamiltonian.kind = "
       << (c.problem.hamiltonian.kind == HamiltonianKind::IsotropicPower
               ? "isotropic-power" : "anisotropic-sum") << "\n";
    os << "hamiltonian.gamma = " << fmt_double(c.problem.hamiltonian.gamma) << "\n";
    os << "hamiltonian.coefficients = ";
    for (std::size_t i = 0; i < c.problem.hamiltonian.coefficients.size(); ++i)
        os << (i ? "," : "") << fmt_double(c.problem.hamiltonian.coefficients[i]);
    os << "\n";
    os << "potential.kind = " << to_string(c.problem.potential.kind) << "\n";
    os << "potential.C_V = " << fmt_double(c.problem.potential.c_v) << "\n";
    os << "potential.b = " << fmt_double(c.problem.potential.b) << "\n";
    os << "domain.dim = " << c.problem.domain.dim << "\n";
    os << "domain.half_width = " << fmt_double(c.problem.domain.half_width) << "\n";
    os << "domain.points_per_axis = " << c.problem.domain.points_per_axis << "\n";
    os << "domain.boundary = " << to_string(c.problem.domain.boundary) << "\n";
    os << "solver.damping = " << fmt_double(c.solver.damping) << "\n";
    os << "solver.hjb_pseudo_time_step = " << fmt_double(c.solver.hjb_pseudo_time_step) << "\n";
    os << "solver.fixed_point_tol = " << fmt_double(c.solver.fixed_point_tol) << "\n";
    os << "solver.multiplier_tol = " << fmt_double(c.solver.multiplier_tol) << "\n";
    os << "solver.max_outer_iters = " << c.solver.max_outer_iters << "\n";
    os << "solver.hjb_max_steps = " << c.solver.hjb_max_steps << "\n";
    os << "solver.delta_schedule = ";
    for (std::size_t i = 0; i < c.solver.delta_schedule.size(); ++i)
        os << (i ? "," : "") << fmt_double(c.solver.delta_schedule[i]);
    os << "\n";
    os << "solver.recenter = " << (c.solver.recenter ? "true" : "false") << "\n";
    return os.str();
}

void write_manifest(const std::string& path, const std::string& command,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << "command " << command << "\n";
    os << "version " << version_string() << "\n";
    for (const auto& in : inputs) os << "input " << in << "\n";
    for (const auto& out : outputs)
        os << "output " << out << " fnv1a64=" << fnv1a_file_hex(out) << "\n";
    if (!os) throw IoError("write failed: " + path);
}

} // namespace mfgs
