#include <cmath>
#include <numbers>

#include <doctest.h>

#include "tflab/atom.hpp"
#include "tflab/corrections.hpp"
#include "tflab/error.hpp"

using namespace tflab;

TEST_CASE("Scott term") {
    CHECK(scott({2.0, 3.0}, 1) == 13.0);
    CHECK(scott({1.0}, 2) == 2.0);
    const auto cfg = NuclearConfiguration::create({1.0, 4.0}, {Vec3{}, Vec3{0, 0, 1}}, 5.0, 2);
    CHECK(scott(cfg) == 34.0);
}

TEST_CASE("Dirac and Schwinger terms") {
    const auto d = dirac_schwinger(2.0, 1);
    CHECK(d.rho43 == 2.0);
    CHECK(d.dirac / d.schwinger == doctest::Approx(-4.5).epsilon(1e-15));
    CHECK(d.dirac < 0.0);
    // both c_TF conventions coincide for q = 1
    CHECK(d.kappa_q.c_tf == d.kappa_q2.c_tf);
    CHECK(d.kappa_q.c_tf == doctest::Approx(std::pow(6.0 * std::numbers::pi * std::numbers::pi, 2.0 / 3.0)));
    const auto d2 = dirac_schwinger(2.0, 2);
    CHECK(d2.kappa_q.c_tf != d2.kappa_q2.c_tf);
    CHECK_THROWS_AS(dirac_schwinger(-1.0, 1), DomainError);
    CHECK_THROWS_AS(dirac_schwinger(RadialDensity({1.0, 2.0}, {1.0, -1.0}), 1), DomainError);
}

TEST_CASE("int rho^{4/3} scales as Z^{5/3}") {
    const auto a1 = solve_atom(1.0, 1.0, 1), a8 = solve_atom(8.0, 8.0, 1);
    CHECK(a8.rho43() / a1.rho43() == doctest::Approx(32.0).epsilon(1e-10));
    // radial quadrature of rho^{4/3} over the profile samples
    const auto r = a1.radii();
    std::vector<double> rr, f;
    for (double x : r)
        if (x > 1e-8 && x < 1e4) {
            rr.push_back(x);
            f.push_back(std::pow(a1.rho(x), 4.0 / 3.0));
        }
    const RadialDensity p(rr, f);
    CHECK(p.total() == doctest::Approx(a1.rho43()).epsilon(1e-3));
}

TEST_CASE("assembled energy and remainder") {
    const auto a = solve_atom(10.0, 10.0, 1);
    const auto c = corrections(a);
    CHECK(c.e_tf == a.energy().total);
    CHECK(c.scott == 100.0);
    CHECK(c.assembled == doctest::Approx(c.e_tf + c.scott + c.ds.dirac + c.ds.schwinger).epsilon(1e-15));
    CHECK(c.remainder == doctest::Approx(remainder_R(10.0, std::numeric_limits<double>::infinity())));
    CHECK(remainder_R(8.0, std::numeric_limits<double>::infinity()) == doctest::Approx(32.0));
    CHECK(remainder_R(8.0, 0.01) == doctest::Approx(64.0));
    CHECK(remainder_R(8.0, 4.0) == doctest::Approx(32.0 + std::pow(8.0, 1.5) * 0.5));
    const auto j = c.to_json();
    CHECK(j.contains("scott"));
    CHECK(j.contains("kappa_dirac_variants"));
}
