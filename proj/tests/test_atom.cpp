#include <cmath>
#include <numbers>

#include <doctest.h>

#include "tflab/atom.hpp"
#include "tflab/error.hpp"

using namespace tflab;

namespace {

constexpr double kPi = std::numbers::pi;

// chi'' = chi^{3/2}/sqrt(x) with x = t^2:  dchi/dt = 2 t p,  dp/dt = 2 chi^{3/2}.
struct Shot {
    long double x_end, chi, p;
    int fate;  // -1 crossed zero, +1 turned up, 0 ran out
};

Shot shoot(long double s, long double t_max = 8.0L, long double dt = 5e-4L) {
    long double t = 0.0L, c = 1.0L, p = s;
    auto f = [](long double tt, long double cc, long double pp, long double& dc, long double& dp) {
        dc = 2.0L * tt * pp;
        dp = cc > 0.0L ? 2.0L * cc * std::sqrt(cc) : 0.0L;
    };
    while (t < t_max) {
        long double k1c, k1p, k2c, k2p, k3c, k3p, k4c, k4p;
        f(t, c, p, k1c, k1p);
        f(t + dt / 2, c + dt / 2 * k1c, p + dt / 2 * k1p, k2c, k2p);
        f(t + dt / 2, c + dt / 2 * k2c, p + dt / 2 * k2p, k3c, k3p);
        f(t + dt, c + dt * k3c, p + dt * k3p, k4c, k4p);
        const long double cn = c + dt / 6 * (k1c + 2 * k2c + 2 * k3c + k4c);
        const long double pn = p + dt / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
        if (cn < 0.0L) {
            // linear crossing inside the step
            const long double th = c / (c - cn);
            const long double tc = t + th * dt;
            return {tc * tc, 0.0L, p + th * (pn - p), -1};
        }
        t += dt;
        c = cn;
        p = pn;
        if (p > 0.0L) return {t * t, c, p, +1};
    }
    return {t * t, c, p, 0};
}

long double neutral_slope_oracle() {
    long double lo = -1.7L, hi = -1.5L;  // lo crosses zero, hi turns up
    for (int it = 0; it < 64; ++it) {
        const long double mid = 0.5L * (lo + hi);
        (shoot(mid).fate < 0 ? lo : hi) = mid;
    }
    return 0.5L * (lo + hi);
}

}  // namespace

TEST_CASE("neutral slope against an independent long double shooting") {
    const double oracle = double(neutral_slope_oracle());
    // frozen oracle output
    CHECK(oracle == doctest::Approx(-1.588071022611).epsilon(1e-9));
    CHECK(neutral_profile()->slope == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("ion profile boundary condition") {
    for (double g : {0.1, 0.5, 0.9}) {
        const auto prof = ion_profile(g);
        const Shot s = shoot(prof->slope, 20.0L, 2e-4L);
        REQUIRE(s.fate == -1);
        // -x0 chi'(x0) = g, where chi' = p in the x variable
        CHECK(double(-s.x_end * s.p) == doctest::Approx(g).epsilon(1e-5));
        CHECK(double(s.x_end) == doctest::Approx(prof->x_cut).epsilon(1e-5));
    }
    CHECK_THROWS_AS(ion_profile(1.5), DomainError);
}

TEST_CASE("neutral atom energy identity E = (3/7) Z^2 chi'(0) / b") {
    for (int q : {1, 2}) {
        const auto a = solve_atom(7.0, 7.0, q);
        CHECK(a.nu() == 0.0);
        CHECK(a.charge() == doctest::Approx(7.0).epsilon(1e-9));
        CHECK(a.energy().total == doctest::Approx(3.0 / 7.0 * 49.0 * a.chi_slope() / a.length_scale()).epsilon(1e-8));
        // virial theorem
        CHECK(a.energy().kinetic == doctest::Approx(-a.energy().total).epsilon(1e-8));
        CHECK(a.duality_gap() >= -1e-11 * std::abs(a.energy().total));
        CHECK(a.duality_gap() < 1e-8 * std::abs(a.energy().total));
    }
    // q = 2 in Hartree units: -0.7687 Z^{7/3}; our energy unit is half a Hartree
    CHECK(solve_atom(1.0, 1.0, 2).energy().total == doctest::Approx(-0.7687 / 2.0).epsilon(2e-4));
}

TEST_CASE("ion: charge, chemical potential and continuity at the edge") {
    const auto a = solve_atom(10.0, 6.0, 1);
    CHECK(a.charge() == doctest::Approx(6.0).epsilon(1e-8));
    CHECK(a.nu() < 0.0);
    CHECK(a.nu() == doctest::Approx(-4.0 / a.r_bar()).epsilon(1e-12));
    const double rb = a.r_bar();
    CHECK(a.W(rb * (1 - 1e-9)) == doctest::Approx(a.W(rb * (1 + 1e-9))).epsilon(1e-6));
    CHECK(a.rho(rb * 1.01) == 0.0);
    CHECK(chemical_potential(10.0, 6.0, 1) == a.nu());
    // more electrons, shallower chemical potential
    CHECK(chemical_potential(10.0, 8.0, 1) > a.nu());
}

TEST_CASE("Hartree potential solves the radial Poisson equation") {
    const auto a = solve_atom(5.0, 3.0, 1);
    for (double r : {0.05, 0.3, 1.0}) {
        CHECK(a.W(r) + a.hartree(r) == doctest::Approx(5.0 / r).epsilon(1e-12));
        const double e = 1e-4 * r;
        auto u = [&](double s) { return s * a.hartree(s); };
        const double lap = (u(r + e) - 2 * u(r) + u(r - e)) / (e * e);
        CHECK(lap == doctest::Approx(-4.0 * kPi * r * a.rho(r)).epsilon(1e-4));
    }
}

TEST_CASE("scaling by rescale matches a direct solve") {
    const auto base = solve_atom(1.0, 0.5, 2);
    const auto big = rescale_solution(base, 8.0);
    const auto direct = solve_atom(8.0, 4.0, 2);
    CHECK(big.energy().total == doctest::Approx(direct.energy().total).epsilon(1e-10));
    CHECK(direct.energy().total == doctest::Approx(base.energy().total * std::pow(8.0, 7.0 / 3.0)).epsilon(1e-10));
    CHECK(direct.nu() == doctest::Approx(base.nu() * std::pow(8.0, 4.0 / 3.0)).epsilon(1e-10));
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(solve_atom(-1.0, 1.0, 1), DomainError);
    CHECK_THROWS_AS(solve_atom(1.0, -1.0, 1), DomainError);
    CHECK_THROWS_AS(solve_atom(1.0, 1.0, 1.5), DomainError);
    CHECK_THROWS_AS(solve_atom(1.0, 1.0, 1).W(0.0), SingularityError);
    CHECK(solve_atom(2.0, 0.0, 1).empty());
}
