#include <doctest.h>

#include "mfgs/errors.hpp"
#include "mfgs/field_io.hpp"

#include <cstdio>
#include <filesystem>
#include <random>

using namespace mfgs;

namespace {

std::string tmp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("field checkpoint round trip is bit exact") {
    Domain d{2, 7.25, 32, Boundary::NoFlux};
    Field f(d);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-1e3, 1e3);
    for (auto& v : f.values) v = dist(rng);
    f[5] = 1e-308; // subnormal-adjacent values survive
    const std::string p = tmp_path("roundtrip.fld");
    write_field(p, f);
    Field g = read_field(p);
    CHECK(g.domain == f.domain);
    REQUIRE(g.values.size() == f.values.size());
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);

    // identical content -> identical bytes
    const std::string p2 = tmp_path("roundtrip2.fld");
    write_field(p2, f);
    CHECK(fnv1a_file(p) == fnv1a_file(p2));
    std::remove(p.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("vector field round trip") {
    Domain d{2, 3.0, 16, Boundary::Periodic};
    VectorField v(d);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int a = 0; a < 2; ++a)
        for (auto& x : v.comp[a]) x = dist(rng);
    const std::string p = tmp_path("vec.fld");
    write_field(p, v);
    VectorField w = read_vector_field(p);
    CHECK(w.domain == d);
    for (int a = 0; a < 2; ++a)
        for (std::size_t i = 0; i < v.comp[a].size(); ++i)
            CHECK(w.comp[a][i] == v.comp[a][i]);
    // scalar reader refuses a vector payload
    CHECK_THROWS_AS(read_field(p), IoError);
    std::remove(p.c_str());
}

TEST_CASE("missing and truncated files raise IoError") {
    CHECK_THROWS_AS(read_field("/nonexistent/nowhere.fld"), IoError);
    const std::string p = tmp_path("trunc.fld");
    {
        Domain d{1, 1.0, 64, Boundary::NoFlux};
        Field f(d, 1.0);
        write_field(p, f);
    }
    std::filesystem::resize_file(p, 40);
    CHECK_THROWS_AS(read_field(p), IoError);
    std::remove(p.c_str());
}
