#pragma once

#include "mfgs/grid.hpp"

#include <cstdint>
#include <string>

namespace mfgs {

// Checkpoint format (.fld): five text header lines
//   dim <1|2>
//   half_width <%.17g>
//   points_per_axis <N>
//   boundary <no-flux|periodic>
//   kind <scalar|vector>
// followed by little-endian IEEE-754 doubles in row-major order (vector
// payloads store the x component block, then y). Writes are bit-exact for a
// fixed input.

void write_field(const std::string& path, const Field& f);
void write_field(const std::string& path, const VectorField& v);

Field read_field(const std::string& path);
VectorField read_vector_field(const std::string& path);

/// FNV-1a 64-bit over a file's bytes; used by run manifests and the
/// determinism checks.
std::uint64_t fnv1a_file(const std::string& path);
std::string fnv1a_file_hex(const std::string& path);

} // namespace mfgs
