#include <cmath>
#include <memory>
#include <numbers>

#include <doctest.h>

#include "tflab/coulomb.hpp"
#include "tflab/error.hpp"

using namespace tflab;

namespace {

constexpr double kPi = std::numbers::pi;

RadialDensity ball(double R, std::size_t n = 4000) {
    const double rho = 3.0 / (4.0 * kPi * R * R * R);
    return RadialDensity::sample(1e-6 * R, R, n, [&](double) { return rho; });
}

// normalized Gaussian of width s; D(g, g) = 1 / (s sqrt(pi))
double gauss(double r, double s) { return std::exp(-r * r / (2 * s * s)) / std::pow(2 * kPi * s * s, 1.5); }

}  // namespace

TEST_CASE("uniform ball") {
    const auto b = ball(1.0);
    CHECK(b.total() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(d_form(b, b) == doctest::Approx(6.0 / 5.0).epsilon(1e-4));
    const auto v = hartree_potential(b);
    CHECK(v.at_origin == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(v.at(0.5) == doctest::Approx((3.0 - 0.25) / 2.0).epsilon(1e-6));
    // Newton screening
    CHECK(v.at(3.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    // D scales as 1/R
    const auto b2 = ball(2.0);
    CHECK(d_form(b2, b2) == doctest::Approx(0.6).epsilon(1e-4));
}

TEST_CASE("Gaussian self energy, bilinearity and Cauchy-Schwarz") {
    auto g1 = RadialDensity::sample(1e-5, 12.0, 3000, [](double r) { return gauss(r, 1.0); });
    auto g2 = RadialDensity::sample(1e-5, 12.0, 3000, [](double r) { return gauss(r, 0.5); });
    CHECK(d_form(g1, g1) == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-5));
    CHECK(d_form(g2, g2) == doctest::Approx(2.0 / std::sqrt(kPi)).epsilon(1e-5));
    // D(g1, g2) for Gaussians of widths s1, s2: 1 / sqrt(pi (s1^2 + s2^2) / 2)
    const double d12 = d_form(g1, g2);
    CHECK(d12 == doctest::Approx(1.0 / std::sqrt(kPi * 1.25 / 2.0)).epsilon(1e-5));
    CHECK(d12 * d12 <= d_form(g1, g1) * d_form(g2, g2));

    RadialDensity sum = g1;
    for (std::size_t i = 0; i < sum.f.size(); ++i) sum.f[i] += 2.0 * g2.f[i];
    CHECK(d_form(sum, sum) ==
          doctest::Approx(d_form(g1, g1) + 4.0 * d12 + 4.0 * d_form(g2, g2)).epsilon(1e-12));
    CHECK(d_form(g1, g2) == doctest::Approx(d_form(g2, g1)).epsilon(1e-14));
}

TEST_CASE("radial density validation") {
    CHECK_THROWS_AS(RadialDensity({1.0, 0.5}, {1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(RadialDensity({0.0, 0.5}, {1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(RadialDensity({1.0}, {1.0}), DomainError);
}

TEST_CASE("grid Poisson solve of a Gaussian") {
    const double L = 7.0;
    auto g = std::make_shared<const Grid3D>(uniform_axis(-L, L, 40), uniform_axis(-L, L, 40), uniform_axis(-L, L, 40));
    ScalarField3D f(g);
    for (std::size_t i = 0; i < g->size(); ++i) {
        if (g->volumes()[i] == 0.0) continue;
        const Vec3 x = g->point(i);
        f.values[i] = gauss(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]), 1.0);
    }
    CHECK(f.integral() == doctest::Approx(1.0).epsilon(1e-3));
    const double d = d_form(f, f);
    CHECK(d == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(2e-2));
    // positivity of the discrete form
    ScalarField3D h(g);
    for (std::size_t i = 0; i < g->size(); ++i) h.values[i] = g->volumes()[i] > 0.0 ? std::sin(double(i)) : 0.0;
    CHECK(d_form(h, h) > 0.0);
    const double dfh = d_form(f, h);
    CHECK(dfh * dfh <= d * d_form(h, h) * (1 + 1e-9));
    // potential far away approaches the total charge over distance
    const auto pot = hartree_potential(f);
    const std::size_t corner = g->index(1, 20, 20);
    const Vec3 xc = g->point(corner);
    const double rc = std::sqrt(xc[0] * xc[0] + xc[1] * xc[1] + xc[2] * xc[2]);
    CHECK(pot.values[corner] == doctest::Approx(f.integral() / rc).epsilon(2e-2));
}
