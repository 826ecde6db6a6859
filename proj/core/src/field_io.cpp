#include "mfgs/field_io.hpp"

#include "mfgs/errors.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mfgs {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

void write_header(std::ostream& os, const Domain& d, const char* kind) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", d.half_width);
    os << "dim " << d.dim << "\n"
       << "half_width " << buf << "\n"
       << "points_per_axis " << d.points_per_axis << "\n"
       << "boundary " << to_string(d.boundary) << "\n"
       << "kind " << kind << "\n";
}

Domain read_header(std::istream& is, const std::string& path, std::string& kind) {
    Domain d;
    std::string key;
    auto expect = [&](const char* want) {
        is >> key;
        if (key != want)
            throw IoError(path + ": expected header line '" + want + "', got '" + key + "'");
    };
    expect("dim"); is >> d.dim;
    expect("half_width"); is >> d.half_width;
    expect("points_per_axis"); is >> d.points_per_axis;
    expect("boundary"); { std::string b; is >> b; d.boundary = boundary_from_string(b); }
    expect("kind"); is >> kind;
    if (!is) throw IoError(path + ": truncated header");
    is.get(); // newline before binary payload
    d.validate();
    return d;
}

void write_payload(std::ostream& os, const std::vector<double>& v) {
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void read_payload(std::istream& is, std::vector<double>& v, const std::string& path) {
    is.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (static_cast<std::size_t>(is.gcount()) != v.size() * sizeof(double))
        throw IoError(path + ": truncated payload");
}

} // namespace

void write_field(const std::string& path, const Field& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_header(os, f.domain, "scalar");
    write_payload(os, f.values);
    if (!os) throw IoError("write failed: " + path);
}

void write_field(const std::string& path, const VectorField& v) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_header(os, v.domain, "vector");
    for (int a = 0; a < v.domain.dim; ++a) write_payload(os, v.comp[a]);
    if (!os) throw IoError("write failed: " + path);
}

Field read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path);
    std::string kind;
    Domain d = read_header(is, path, kind);
    if (kind != "scalar") throw IoError(path + ": expected scalar field, got " + kind);
    Field f(d);
    read_payload(is, f.values, path);
    return f;
}

VectorField read_vector_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path);
    std::string kind;
    Domain d = read_header(is, path, kind);
    if (kind != "vector") throw IoError(path + ": expected vector field, got " + kind);
    VectorField v(d);
    for (int a = 0; a < d.dim; ++a) read_payload(is, v.comp[a], path);
    return v;
}

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path);
    std::uint64_t h = 1469598103934665603ull;
    char buf[1 << 14];
    while (is) {
        is.read(buf, sizeof buf);
        for (std::streamsize i = 0; i < is.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    return h;
}

std::string fnv1a_file_hex(const std::string& path) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a_file(path)));
    return buf;
}

} // namespace mfgs
