#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "tflab/atom.hpp"
#include "tflab/error.hpp"
#include "tflab/trajectories.hpp"

using namespace tflab;

namespace {

constexpr double kPi = std::numbers::pi;

// Phi = int_{r1}^{r2} M / (r^2 sqrt(W + nu - M^2/r^2)) dr with r = c + d sin(theta);
// the endpoint singularities cancel against dr = d cos(theta).
double apsidal_oracle(const std::function<double(double)>& W, double M, double nu, double r1, double r2) {
    const double c = 0.5 * (r1 + r2), d = 0.5 * (r2 - r1);
    const int n = 4000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double th = -0.5 * kPi + kPi * (i + 0.5) / n;
        const double r = c + d * std::sin(th);
        const double pr2 = W(r) + nu - M * M / (r * r);
        s += M / (r * r) * d * std::cos(th) / std::sqrt(std::max(pr2, 1e-300));
    }
    return s * kPi / n;
}

}  // namespace

TEST_CASE("Kepler orbits close after pi") {
    const auto pot = CentralPotential::coulomb(1.0);
    const auto r = rotation_number(pot, 0.5, -0.25);
    // r^2 - 4 r + 1 = 0
    CHECK(r.r1 == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-12));
    CHECK(r.r2 == doctest::Approx(2.0 + std::sqrt(3.0)).epsilon(1e-12));
    CHECK(r.phi_quad == doctest::Approx(kPi).epsilon(1e-10));
    CHECK(r.phi_orbit == doctest::Approx(kPi).epsilon(1e-8));
    CHECK(r.energy_drift < 1e-8);
    // radial period 2 pi Z / (2 E)^{3/2} ... with m = 1/2: T = pi Z / E^{3/2} / 2
    CHECK(r.radial_period == doctest::Approx(kPi / (2.0 * std::pow(0.25, 1.5))).epsilon(1e-8));

    const auto c = circular_orbit(pot, -0.25);
    CHECK(c.r0 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c.M == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.phi0 == doctest::Approx(kPi).epsilon(1e-12));
    CHECK_FALSE(c.exceeds_pi);
    // factor-2 radicand is the same as M / sqrt 2
    RotationOptions f2;
    f2.paper_factor2 = true;
    f2.integrate = false;
    const auto r2 = rotation_number(pot, 0.5 * std::sqrt(2.0), -0.25, f2);
    CHECK(r2.r1 == doctest::Approx(r.r1).epsilon(1e-12));
}

TEST_CASE("isotropic oscillator from samples closes after pi/2") {
    std::vector<double> rs, ws;
    for (int i = 0; i <= 3000; ++i) {
        const double r = 1e-4 * std::pow(1e6, i / 3000.0);
        rs.push_back(r);
        ws.push_back(-r * r);
    }
    const auto pot = CentralPotential::from_samples(rs, ws);
    CHECK(pot.W(1.3) == doctest::Approx(-1.69).epsilon(1e-9));
    CHECK(pot.dW(1.3) == doctest::Approx(-2.6).epsilon(1e-7));
    const auto r = rotation_number(pot, 1.0, 4.0);
    CHECK(r.phi_quad == doctest::Approx(kPi / 2).epsilon(1e-8));
    CHECK(r.phi_orbit == doctest::Approx(kPi / 2).epsilon(1e-6));
    // W'' of a cubic spline is only piecewise linear
    CHECK(circular_orbit(pot, 4.0).phi0 == doctest::Approx(kPi / 2).epsilon(1e-5));
    CHECK_THROWS_AS(pot.W(1e3), DomainError);
}

TEST_CASE("TF orbits against an independent quadrature") {
    const auto atom = solve_atom(1.0, 1.0, 1);
    const auto pot = CentralPotential::from_atom(atom);
    const double nu = -0.01;
    const auto c = circular_orbit(pot, nu);
    CHECK(c.phi0 > kPi);
    auto W = [&](double r) { return atom.W(r); };
    for (double f : {0.3, 0.6, 0.9}) {
        RotationOptions o;
        o.integrate = false;
        const auto r = rotation_number(pot, f * c.M, nu, o);
        CHECK(r.phi_quad == doctest::Approx(apsidal_oracle(W, f * c.M, nu, r.r1, r.r2)).epsilon(1e-6));
        CHECK(r.phi_quad > kPi);
        CHECK(r.phi_quad < 2.0 * kPi);
    }
    // small M: the Coulomb core takes over and Phi decreases towards pi from above
    double prev = 2.0 * kPi;
    for (double f : {0.1, 0.03, 0.01, 0.003}) {
        RotationOptions o;
        o.integrate = false;
        const double phi = rotation_number(pot, f * c.M, nu, o).phi_quad;
        CHECK(phi > kPi);
        CHECK(phi < prev);
        prev = phi;
    }
    CHECK(prev - kPi < 0.01);
    const auto cv = convexity(pot, 1e-3, 10.0);
    CHECK(cv.decreasing);
    CHECK(cv.subharmonic);
}

TEST_CASE("orbit integration conserves energy and angular momentum") {
    const auto pot = CentralPotential::coulomb(2.0);
    OrbitState s;
    s.x = {1.0, 0.0};
    s.p = {0.0, 1.0};
    const double H = 1.0 - 2.0;
    const auto o = integrate_orbit(pot, s, H, 50.0, 1e-3, 100);
    CHECK(o.energy_drift < 1e-8);
    for (const auto& smp : o.samples) {
        const double L = smp.s.x[0] * smp.s.p[1] - smp.s.x[1] * smp.s.p[0];
        CHECK(L == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(integrate_orbit(pot, s, H + 0.1, 1.0, 1e-3), DomainError);
    CHECK(o.csv().rfind("t,x,y,px,py\n", 0) == 0);
}

TEST_CASE("rotation number input validation") {
    const auto pot = CentralPotential::coulomb(1.0);
    CHECK_THROWS_AS(rotation_number(pot, 5.0, -0.25), DomainError);
    CHECK_THROWS_AS(rotation_number(pot, 0.5, 0.1), DomainError);
}
