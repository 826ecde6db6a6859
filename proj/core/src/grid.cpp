#include "mfgs/grid.hpp"

#include "mfgs/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mfgs {

std::string to_string(Boundary b) {
    return b == Boundary::NoFlux ? "no-flux" : "periodic";
}

Boundary boundary_from_string(const std::string& s) {
    if (s == "no-flux") return Boundary::NoFlux;
    if (s == "periodic") return Boundary::Periodic;
    throw ValidationError("unknown boundary mode: " + s);
}

double Domain::cell_volume() const {
    const double h = spacing();
    return dim == 1 ? h : h * h;
}

std::size_t Domain::center_index() const {
    const std::size_t c = static_cast<std::size_t>(center_index_1d());
    return dim == 1 ? c : c * points_per_axis + c;
}

double Domain::radius(std::size_t idx) const {
    double x[2];
    coords(idx, x);
    return dim == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
}

void Domain::coords(std::size_t idx, double* x) const {
    if (dim == 1) {
        x[0] = cell_center(static_cast<int>(idx));
        return;
    }
    const int N = points_per_axis;
    x[0] = cell_center(static_cast<int>(idx % N));
    x[1] = cell_center(static_cast<int>(idx / N));
}

void Domain::validate() const {
    if (dim != 1 && dim != 2)
        throw ValidationError("domain: dim must be 1 or 2");
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw ValidationError("domain: half_width must be finite and > 0");
    if (points_per_axis < 16)
        throw ValidationError("domain: points_per_axis must be >= 16");
}

// ---------------------------------------------------------------------------
// quadrature
// ---------------------------------------------------------------------------

namespace {

// Neumaier compensated sum; keeps quadrature deterministic and tight.
double csum(const std::vector<double>& v) {
    double s = 0.0, c = 0.0;
    for (double x : v) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    return s + c;
}

template <class F>
double csum_map(std::size_t n, F&& f) {
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = f(i);
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    return s + c;
}

} // namespace

double integrate(const Field& f) { return f.domain.cell_volume() * csum(f.values); }

double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw ValidationError("lp_norm: p must be >= 1");
    const double vol = f.domain.cell_volume();
    if (p == 1.0)
        return vol * csum_map(f.size(), [&](std::size_t i) { return std::abs(f[i]); });
    if (p == 2.0)
        return std::sqrt(vol * csum_map(f.size(), [&](std::size_t i) { return f[i] * f[i]; }));
    double s = vol * csum_map(f.size(), [&](std::size_t i) {
        return std::pow(std::abs(f[i]), p);
    });
    return std::pow(s, 1.0 / p);
}

double inner(const Field& a, const Field& b) {
    return a.domain.cell_volume() *
           csum_map(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

double inner(const VectorField& a, const VectorField& b) {
    double s = 0.0;
    for (int ax = 0; ax < a.domain.dim; ++ax)
        s += a.domain.cell_volume() * csum_map(a.comp[ax].size(), [&](std::size_t i) {
                 return a.comp[ax][i] * b.comp[ax][i];
             });
    return s;
}

double max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

// ---------------------------------------------------------------------------
// operators
// ---------------------------------------------------------------------------

VectorField gradient(const Field& f) {
    const Domain& d = f.domain;
    VectorField g(d);
    const int N = d.points_per_axis;
    const double inv2h = 1.0 / (2.0 * d.spacing());
    const Boundary mode = d.boundary;

    for (int ax = 0; ax < d.dim; ++ax) {
        const long stride = (ax == 0) ? 1 : N;
        const long lines = (d.dim == 1) ? 1 : N;
        const long line_stride = (ax == 0) ? N : 1;
        for (long l = 0; l < lines; ++l) {
            const long base = l * line_stride;
            for (long i = 0; i < N; ++i) {
                double up, dn;
                if (i + 1 < N) up = f.values[base + (i + 1) * stride];
                else if (mode == Boundary::Periodic) up = f.values[base];
                else up = f.values[base + i * stride]; // even reflection
                if (i - 1 >= 0) dn = f.values[base + (i - 1) * stride];
                else if (mode == Boundary::Periodic) dn = f.values[base + (N - 1) * stride];
                else dn = f.values[base + i * stride];
                g.comp[ax][base + i * stride] = (up - dn) * inv2h;
            }
        }
    }
    return g;
}

Field divergence(const VectorField& v) {
    const Domain& d = v.domain;
    Field out(d);
    const int N = d.points_per_axis;
    const double inv2h = 1.0 / (2.0 * d.spacing());
    const Boundary mode = d.boundary;

    for (int ax = 0; ax < d.dim; ++ax) {
        const long stride = (ax == 0) ? 1 : N;
        const long lines = (d.dim == 1) ? 1 : N;
        const long line_stride = (ax == 0) ? N : 1;
        const std::vector<double>& c = v.comp[ax];
        for (long l = 0; l < lines; ++l) {
            const long base = l * line_stride;
            for (long i = 0; i < N; ++i) {
                double up, dn;
                if (i + 1 < N) up = c[base + (i + 1) * stride];
                else if (mode == Boundary::Periodic) up = c[base];
                else up = -c[base + i * stride]; // odd reflection: wall flux 0
                if (i - 1 >= 0) dn = c[base + (i - 1) * stride];
                else if (mode == Boundary::Periodic) dn = c[base + (N - 1) * stride];
                else dn = -c[base + i * stride];
                out.values[base + i * stride] += (up - dn) * inv2h;
            }
        }
    }
    return out;
}

Field laplacian(const Field& f) {
    const Domain& d = f.domain;
    Field out(d);
    const int N = d.points_per_axis;
    const double invh2 = 1.0 / (d.spacing() * d.spacing());
    const Boundary mode = d.boundary;

    for (int ax = 0; ax < d.dim; ++ax) {
        const long stride = (ax == 0) ? 1 : N;
        const long lines = (d.dim == 1) ? 1 : N;
        const long line_stride = (ax == 0) ? N : 1;
        for (long l = 0; l < lines; ++l) {
            const long base = l * line_stride;
            for (long i = 0; i < N; ++i) {
                const double uc = f.values[base + i * stride];
                double acc = 0.0;
                if (i + 1 < N) acc += f.values[base + (i + 1) * stride] - uc;
                else if (mode == Boundary::Periodic) acc += f.values[base] - uc;
                if (i - 1 >= 0) acc += f.values[base + (i - 1) * stride] - uc;
                else if (mode == Boundary::Periodic) acc += f.values[base + (N - 1) * stride] - uc;
                out.values[base + i * stride] += acc * invh2;
            }
        }
    }
    return out;
}

double fp_residual(const FlowPair& pair) {
    Field lm = laplacian(pair.m);
    Field dv = divergence(pair.w);
    const double vol = pair.m.domain.cell_volume();
    double s = csum_map(lm.size(), [&](std::size_t i) {
        double r = lm[i] - dv[i];
        return r * r;
    });
    return std::sqrt(vol * s);
}

double tail_mass_fraction(const Field& m) {
    const Domain& d = m.domain;
    const int N = d.points_per_axis;
    double tail = 0.0, total = 0.0;
    for (std::size_t idx = 0; idx < m.size(); ++idx) {
        const int ix = static_cast<int>(idx) % N;
        const int iy = d.dim == 2 ? static_cast<int>(idx) / N : N / 2;
        const bool outer = ix < 2 || ix >= N - 2 || (d.dim == 2 && (iy < 2 || iy >= N - 2));
        total += m[idx];
        if (outer) tail += m[idx];
    }
    return total > 0.0 ? tail / total : 0.0;
}

Field shift_field(const Field& f, const std::array<int, 2>& shift) {
    const Domain& d = f.domain;
    Field out(d);
    const int N = d.points_per_axis;
    auto clampwrap = [&](int i) {
        if (d.boundary == Boundary::Periodic) return ((i % N) + N) % N;
        return std::clamp(i, 0, N - 1);
    };
    if (d.dim == 1) {
        for (int i = 0; i < N; ++i) out.values[i] = f.values[clampwrap(i - shift[0])];
        return out;
    }
    for (int iy = 0; iy < N; ++iy)
        for (int ix = 0; ix < N; ++ix)
            out.values[static_cast<std::size_t>(iy) * N + ix] =
                f.values[static_cast<std::size_t>(clampwrap(iy - shift[1])) * N +
                         clampwrap(ix - shift[0])];
    return out;
}

} // namespace mfgs
