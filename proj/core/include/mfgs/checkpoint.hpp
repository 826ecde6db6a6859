#pragma once

#include "mfgs/solver.hpp"

#include <string>
#include <vector>

namespace mfgs {

// A solution checkpoint is a directory holding u.fld, m.fld, w.fld and a flat
// triple.txt with the scalar state (multiplier, mode, alpha, Hamiltonian).

std::vector<std::string> save_triple(const std::string& dir, const SolutionTriple& sol);
SolutionTriple load_triple(const std::string& dir);

} // namespace mfgs
