#include <doctest.h>

#include "mfgs/errors.hpp"
#include "mfgs/hamiltonian.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>

using namespace mfgs;

namespace {

std::span<const double> sp(const std::array<double, 2>& a, std::size_t n = 2) {
    return {a.data(), n};
}

// Independent zoom grid-search oracle for L(q) = sup_p [p.q - H(p)]:
// repeatedly scans a shrinking box around the best point. Shares nothing with
// the closed-form or golden-section paths.
double brute_force_l(const HamiltonianSpec& spec, const std::array<double, 2>& q,
                     std::size_t dim) {
    double c0 = 0.0, c1 = 0.0;
    double half = 0.0;
    for (std::size_t i = 0; i < dim; ++i) half = std::max(half, std::abs(q[i]));
    double cmin = spec.coefficients[0];
    for (double c : spec.coefficients) cmin = std::min(cmin, c);
    // |p*| <= (|q|/(gamma C_min))^(1/(gamma-1)); pad generously
    half = 2.0 + 2.0 * std::pow((half * 2.0 + 1.0) / (spec.gamma * cmin),
                                1.0 / (spec.gamma - 1.0));
    double best = 0.0;
    const int grid = 41;
    for (int level = 0; level < 6; ++level) {
        double bx = c0, by = c1;
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < (dim == 2 ? grid : 1); ++j) {
                std::array<double, 2> p = {
                    c0 - half + 2.0 * half * i / (grid - 1),
                    dim == 2 ? c1 - half + 2.0 * half * j / (grid - 1) : 0.0};
                double val = 0.0;
                for (std::size_t a = 0; a < dim; ++a) val += p[a] * q[a];
                val -= eval_h(spec, sp(p, dim));
                if (val > best) {
                    best = val;
                    bx = p[0];
                    by = p[1];
                }
            }
        c0 = bx;
        c1 = by;
        half *= 2.5 / (grid - 1); // keep a couple of old cells of slack
    }
    return best;
}

} // namespace

TEST_CASE("eval_h closed forms") {
    HamiltonianSpec iso{HamiltonianKind::IsotropicPower, 2.0, {1.0}};
    CHECK(eval_h(iso, sp({3.0, 4.0})) == doctest::Approx(25.0).epsilon(1e-14));
    CHECK(eval_h(iso, sp({0.0, 0.0})) == 0.0);

    HamiltonianSpec aniso{HamiltonianKind::AnisotropicSum, 3.0, {1.0, 2.0}};
    CHECK(eval_h(aniso, sp({1.0, 1.0})) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(eval_h(aniso, sp({0.0, 0.0})) == 0.0);

    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(eval_h(iso, sp({inf, 0.0})), ValidationError);
}

TEST_CASE("grad_h: explicit values, Euler identity, homogeneity") {
    HamiltonianSpec iso{HamiltonianKind::IsotropicPower, 2.0, {1.0}};
    std::array<double, 2> g{};
    grad_h(iso, sp({3.0, 4.0}), std::span<double>(g.data(), 2));
    CHECK(g[0] == doctest::Approx(6.0));
    CHECK(g[1] == doctest::Approx(8.0));

    // p . grad H = gamma H on random points for both kinds
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    HamiltonianSpec cubic{HamiltonianKind::AnisotropicSum, 3.0, {1.0, 2.0}};
    for (int k = 0; k < 200; ++k) {
        std::array<double, 2> p = {dist(rng), dist(rng)};
        for (const auto& spec : {iso, cubic}) {
            grad_h(spec, sp(p), std::span<double>(g.data(), 2));
            const double lhs = p[0] * g[0] + p[1] * g[1];
            const double rhs = spec.gamma * eval_h(spec, sp(p));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }

    // grad H(t p) = t^(gamma-1) grad H(p), here gamma = 3, t = 2
    HamiltonianSpec g3{HamiltonianKind::IsotropicPower, 3.0, {1.0}};
    std::array<double, 2> g1{}, g2{};
    grad_h(g3, sp({0.7, -0.4}), std::span<double>(g1.data(), 2));
    grad_h(g3, sp({1.4, -0.8}), std::span<double>(g2.data(), 2));
    CHECK(g2[0] == doctest::Approx(4.0 * g1[0]).epsilon(1e-12));
    CHECK(g2[1] == doctest::Approx(4.0 * g1[1]).epsilon(1e-12));

    // singular origin for gamma < 2: continuous extension 0, flagged
    HamiltonianSpec g15{HamiltonianKind::IsotropicPower, 1.5, {1.0}};
    bool degenerate = false;
    grad_h(g15, sp({0.0, 0.0}), std::span<double>(g.data(), 2), &degenerate);
    CHECK(degenerate);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
}

TEST_CASE("homogeneity of H on random samples") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    std::uniform_real_distribution<double> tdist(0.01, 10.0);
    for (double gamma : {1.5, 2.0, 3.0}) {
        HamiltonianSpec spec{HamiltonianKind::IsotropicPower, gamma, {0.8}};
        for (int k = 0; k < 500; ++k) {
            std::array<double, 2> p = {dist(rng), dist(rng)};
            const double t = tdist(rng);
            std::array<double, 2> tp = {t * p[0], t * p[1]};
            const double lhs = eval_h(spec, sp(tp));
            const double rhs = std::pow(t, gamma) * eval_h(spec, sp(p));
            CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + rhs));
        }
    }
}

TEST_CASE("eval_l: frozen oracle values and closed forms") {
    HamiltonianSpec iso2{HamiltonianKind::IsotropicPower, 2.0, {1.0}};
    // zoom grid search confirms |q|^2/4
    CHECK(brute_force_l(iso2, {2.0, 0.0}, 2) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(eval_l(iso2, sp({2.0, 0.0})) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(eval_l(iso2, sp({0.0, 0.0})) == 0.0);

    // gamma = 3: value matches (1/gamma')(gamma C)^(1-gamma') |q|^gamma'
    HamiltonianSpec iso3{HamiltonianKind::IsotropicPower, 3.0, {1.0}};
    const double gp = 1.5;
    const double expected = (1.0 / gp) * std::pow(3.0, 1.0 - gp);
    CHECK(eval_l(iso3, sp({1.0, 0.0})) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(brute_force_l(iso3, {1.0, 0.0}, 2) == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("eval_l agrees with golden-section and brute force on random inputs") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> dist(-2.5, 2.5);
    for (double gamma : {1.5, 2.0, 3.0}) {
        HamiltonianSpec iso{HamiltonianKind::IsotropicPower, gamma, {1.3}};
        HamiltonianSpec aniso{HamiltonianKind::AnisotropicSum, gamma, {1.0, 2.0}};
        for (int k = 0; k < 25; ++k) {
            std::array<double, 2> q = {dist(rng), dist(rng)};
            for (const auto& spec : {iso, aniso}) {
                const double closed = eval_l(spec, sp(q));
                const double golden = eval_l_numeric(spec, sp(q));
                const double brute = brute_force_l(spec, q, 2);
                CHECK(std::abs(closed - golden) <= 1e-10 * (1.0 + std::abs(closed)));
                CHECK(std::abs(closed - brute) <= 1e-8 * (1.0 + std::abs(closed)));
            }
        }
    }
}

TEST_CASE("Fenchel-Young inequality with equality at q = grad H(p)") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (double gamma : {1.5, 2.0, 3.0}) {
        HamiltonianSpec spec{HamiltonianKind::IsotropicPower, gamma, {1.0}};
        for (int k = 0; k < 500; ++k) {
            std::array<double, 2> p = {dist(rng), dist(rng)};
            std::array<double, 2> q = {dist(rng), dist(rng)};
            const double lhs = p[0] * q[0] + p[1] * q[1];
            const double rhs = eval_h(spec, sp(p)) + eval_l(spec, sp(q));
            CHECK(lhs <= rhs + 1e-10 * (1.0 + std::abs(rhs)));

            std::array<double, 2> g{};
            grad_h(spec, sp(p), std::span<double>(g.data(), 2));
            const double touch = p[0] * g[0] + p[1] * g[1];
            const double bound = eval_h(spec, sp(p)) + eval_l(spec, sp(g));
            CHECK(std::abs(touch - bound) <= 1e-10 * (1.0 + std::abs(bound)));
        }
    }
}

TEST_CASE("fenchel_check residual vanishes") {
    HamiltonianSpec iso2{HamiltonianKind::IsotropicPower, 2.0, {1.0}};
    CHECK(fenchel_residual(iso2, sp({1.0, 1.0})) <= 1e-14);
    HamiltonianSpec iso3{HamiltonianKind::IsotropicPower, 3.0, {1.0}};
    CHECK(fenchel_residual(iso3, sp({1.0, 0.0})) < 1e-12);
    for (double t : {0.5, 1.0, 2.0}) {
        std::array<double, 2> p = {t, 0.0};
        CHECK(fenchel_residual(iso3, sp(p)) <=
              1e-12 * (1.0 + (iso3.gamma - 1.0) * eval_h(iso3, sp(p))));
    }
}

TEST_CASE("kinetic_density: extended-value cases and convexity") {
    HamiltonianSpec spec{HamiltonianKind::IsotropicPower, 2.0, {1.0}};
    CHECK(kinetic_density(spec, 0.0, sp({0.0, 0.0})).value == 0.0);
    CHECK_FALSE(kinetic_density(spec, 0.0, sp({0.0, 0.0})).infinite);
    CHECK(kinetic_density(spec, 0.0, sp({1.0, 0.0})).infinite);
    CHECK(kinetic_density(spec, -0.5, sp({0.0, 0.0})).infinite);
    // m = 2, w = (-2, 0): 2 L((1,0)) = 0.5
    CHECK(kinetic_density(spec, 2.0, sp({-2.0, 0.0})).value ==
          doctest::Approx(0.5).epsilon(1e-14));

    // midpoint convexity on random feasible points
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> mdist(0.05, 3.0);
    std::uniform_real_distribution<double> wdist(-2.0, 2.0);
    for (int k = 0; k < 300; ++k) {
        const double m1 = mdist(rng), m2 = mdist(rng);
        std::array<double, 2> w1 = {wdist(rng), wdist(rng)};
        std::array<double, 2> w2 = {wdist(rng), wdist(rng)};
        std::array<double, 2> wm = {0.5 * (w1[0] + w2[0]), 0.5 * (w1[1] + w2[1])};
        const double lhs = kinetic_density(spec, 0.5 * (m1 + m2), sp(wm)).value;
        const double rhs = 0.5 * kinetic_density(spec, m1, sp(w1)).value +
                           0.5 * kinetic_density(spec, m2, sp(w2)).value;
        CHECK(lhs <= rhs + 1e-10 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("bounds C_H |p|^g <= H <= C'_H |p|^g hold on samples") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    HamiltonianSpec aniso{HamiltonianKind::AnisotropicSum, 3.0, {0.5, 2.0}};
    HamiltonianBounds b = hamiltonian_bounds(aniso, 2);
    CHECK(b.c_h_upper > b.c_h);
    const double gp = aniso.gamma_prime();
    for (int k = 0; k < 10000; ++k) {
        std::array<double, 2> p = {dist(rng), dist(rng)};
        const double r = std::hypot(p[0], p[1]);
        const double h = eval_h(aniso, sp(p));
        CHECK(h >= b.c_h * std::pow(r, 3.0) - 1e-12);
        CHECK(h <= b.c_h_upper * std::pow(r, 3.0) + 1e-12);
        std::array<double, 2> q = {dist(rng), dist(rng)};
        const double rq = std::hypot(q[0], q[1]);
        const double l = eval_l(aniso, sp(q));
        CHECK(l >= b.c_l * std::pow(rq, gp) - 1e-12);
        CHECK(l <= b.c_l_upper * std::pow(rq, gp) + 1e-12);
    }
}

TEST_CASE("spec validation and conjugate exponent") {
    HamiltonianSpec bad{HamiltonianKind::IsotropicPower, 1.0, {1.0}};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad.gamma = 2.0;
    bad.coefficients = {0.0};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad.coefficients = {1.0};
    CHECK_NOTHROW(bad.validate());
    for (double g : {1.2, 1.5, 2.0, 3.0, 7.0}) {
        HamiltonianSpec s{HamiltonianKind::IsotropicPower, g, {1.0}};
        CHECK(1.0 / g + 1.0 / s.gamma_prime() == doctest::Approx(1.0).epsilon(1e-14));
    }
}
