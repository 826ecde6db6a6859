#pragma once

#include "mfgs/functionals.hpp"
#include "mfgs/solver.hpp"

#include <string>

namespace mfgs {

/// Batch run description parsed from flat `section.key = value` text.
/// Unknown keys are rejected; parse(serialize(c)) reproduces c exactly.
struct RunConfig {
    ProblemSpec problem;
    SolverConfig solver;

    void validate() const {
        problem.validate();
        solver.validate();
    }
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);
std::string serialize_run_config(const RunConfig& config);

/// Version reported by the CLI and stamped into run manifests.
const char* version_string();

/// Manifest of a command run: inputs, version, output hashes (FNV-1a 64).
void write_manifest(const std::string& path, const std::string& command,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs);

} // namespace mfgs
