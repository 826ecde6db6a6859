#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace mfgs {

enum class Boundary { NoFlux, Periodic };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

/// Uniform cell-centered tensor grid on [-R, R]^dim, dim in {1, 2}.
/// Cell centers: x_i = -R + (i + 1/2) h with h = 2R/N.
struct Domain {
    int dim = 1;
    double half_width = 1.0;
    int points_per_axis = 64;
    Boundary boundary = Boundary::NoFlux;

    double spacing() const { return 2.0 * half_width / points_per_axis; }
    std::size_t cell_count() const {
        std::size_t n = static_cast<std::size_t>(points_per_axis);
        return dim == 1 ? n : n * n;
    }
    double cell_volume() const;
    double cell_center(int i) const { return -half_width + (i + 0.5) * spacing(); }
    int center_index_1d() const { return points_per_axis / 2; }
    std::size_t center_index() const;

    /// |x| at linear cell index (Euclidean).
    double radius(std::size_t idx) const;
    void coords(std::size_t idx, double* x) const;

    void validate() const; // dim in {1,2}, N >= 16, R > 0
    bool operator==(const Domain&) const = default;
};

struct Field {
    Domain domain;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Domain& d, double fill = 0.0)
        : domain(d), values(d.cell_count(), fill) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
};

struct VectorField {
    Domain domain;
    std::array<std::vector<double>, 2> comp;

    VectorField() = default;
    explicit VectorField(const Domain& d) : domain(d) {
        for (int a = 0; a < d.dim; ++a) comp[a].assign(d.cell_count(), 0.0);
    }
};

/// (m, w) pair; the discrete stand-in for membership in the admissible set.
struct FlowPair {
    Field m;
    VectorField w;
};

// ---------------------------------------------------------------------------
// quadrature and norms
// ---------------------------------------------------------------------------

/// Midpoint quadrature h^dim * sum(values), Neumaier-compensated.
double integrate(const Field& f);

/// (integral |f|^p)^(1/p), p >= 1.
double lp_norm(const Field& f, double p);

double inner(const Field& a, const Field& b);           // h^dim sum a_i b_i
double inner(const VectorField& a, const VectorField& b);
double max_abs(const Field& f);

// ---------------------------------------------------------------------------
// differential operators (second-order centered, boundary-mode aware)
// ---------------------------------------------------------------------------

/// Centered gradient. NoFlux uses even reflection across the wall faces,
/// Periodic wraps.
VectorField gradient(const Field& f);

/// Centered divergence of a cell-centered vector field. NoFlux uses odd
/// reflection (vanishing wall flux), Periodic wraps.
Field divergence(const VectorField& v);

/// Conservative face-flux Laplacian (3/5-point). Zero wall flux under NoFlux.
Field laplacian(const Field& f);

/// Discrete L2 norm of Delta_h m - div_h w, the strong-form residual of the
/// stationary Fokker-Planck constraint coupling the pair.
double fp_residual(const FlowPair& pair);

/// Mass fraction carried by the outermost two cell layers; the
/// domain-too-small diagnostic. Assumes m >= 0.
double tail_mass_fraction(const Field& m);

/// Translate by whole cells (edge cells replicate under NoFlux, wrap under
/// Periodic). shift[a] > 0 moves content toward larger coordinates.
Field shift_field(const Field& f, const std::array<int, 2>& shift);

} // namespace mfgs
