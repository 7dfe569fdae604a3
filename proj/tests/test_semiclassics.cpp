#include <cmath>
#include <numbers>

#include <doctest.h>

#include "tflab/atom.hpp"
#include "tflab/error.hpp"
#include "tflab/semiclassics.hpp"

using namespace tflab;

namespace {

SpectralSummary hydrogen(double Z, int q = 1) {
    SpectrumOptions o;
    o.h = 2e-3 / Z;
    o.r_max = 80.0 / Z;
    o.coulomb_charge = Z;
    return radial_spectrum([Z](double r) { return Z / r; }, q, o);
}

}  // namespace

TEST_CASE("hydrogen spectrum") {
    for (double Z : {1.0, 3.0}) {
        const auto s = hydrogen(Z);
        REQUIRE(s.eigenvalues.size() >= 3);
        // E_{n} = -Z^2 / (4 n^2), n = k + l + 1
        for (std::size_t l = 0; l < 3; ++l)
            for (std::size_t k = 0; k + l < 3; ++k)
                CHECK(s.eigenvalues[l][k] == doctest::Approx(-Z * Z / (4.0 * double((k + l + 1) * (k + l + 1)))).epsilon(1e-4));
        // shells n = 1, 2 below -Z^2/20
        CHECK(s.count(-Z * Z / 20.0) == 5.0);
        CHECK(s.trace(-Z * Z / 20.0) ==
              doctest::Approx((-Z * Z / 4.0 + Z * Z / 20.0) + 4.0 * (-Z * Z / 16.0 + Z * Z / 20.0)).epsilon(1e-4));
        CHECK(s.lambda_N(1.0) == doctest::Approx(-Z * Z / 4.0).epsilon(1e-4));
        CHECK(s.lambda_N(3.0) == doctest::Approx(-Z * Z / 16.0).epsilon(1e-4));
    }
    const auto s2 = hydrogen(1.0, 2);
    CHECK(s2.count(-0.05) == 10.0);
}

TEST_CASE("Weyl terms of the Coulomb potential in closed form") {
    // count = q Z^3 E^{-3/2} / 24,  trace = -q Z^3 / (12 sqrt E)  at level -E
    for (int q : {1, 2})
        for (double E : {0.05, 0.5}) {
            const double Z = 2.0;
            const auto w = weyl_terms([Z](double r) { return Z / r; }, -E, q, 1.0, {Z / E});
            CHECK(w.count == doctest::Approx(q * Z * Z * Z / (24.0 * std::pow(E, 1.5))).epsilon(1e-8));
            CHECK(w.trace == doctest::Approx(-q * Z * Z * Z / (12.0 * std::sqrt(E))).epsilon(1e-8));
        }
}

TEST_CASE("zero potential") {
    const auto w = weyl_terms([](double) { return 0.0; }, -1.0, 1);
    CHECK(w.count == 0.0);
    CHECK(w.trace == 0.0);
    CHECK_THROWS_AS(weyl_terms([](double) { return 0.0; }, 1.0, 1), DomainError);
    // a potential that never decays
    CHECK_THROWS_AS(weyl_terms([](double) { return 1.0; }, 0.0, 1), DivergenceError);
    const auto s = radial_spectrum([](double) { return 0.0; }, 1);
    CHECK(s.count(0.0) == 0.0);
    CHECK(s.lambda_N(1.0) == 0.0);
}

TEST_CASE("Weyl count of the TF atom is the electron number") {
    const auto n = solve_atom(6.0, 6.0, 1);
    CHECK(weyl_terms(n, 0.0).count == doctest::Approx(6.0).epsilon(1e-8));
    const auto ion = solve_atom(6.0, 3.0, 2);
    CHECK(weyl_terms(ion, ion.nu()).count == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("spectral report of a TF atom") {
    const auto a = solve_atom(10.0, 10.0, 1);
    const auto rep = spectral_report(a);
    // the Scott term is positive
    CHECK(rep.n1 > rep.weyl_trace);
    CHECK(rep.scott == 100.0);
    CHECK(rep.ratio_standard == doctest::Approx(rep.ratio * 8.0).epsilon(1e-12));
    // hydrogenic normalization lands near one
    CHECK(rep.ratio_standard > 0.8);
    CHECK(rep.ratio_standard < 1.2);
    // a neutral TF atom binds fewer than N states; lambda_N is then reported as 0
    CHECK(rep.count < 10.0);
    CHECK(rep.lambda_N == 0.0);
    CHECK(rep.lambda_bound == doctest::Approx(std::pow(10.0, 8.0 / 9.0)));
}

TEST_CASE("N1 is the integral of the counting function") {
    const auto s = hydrogen(1.0);
    // trace(lambda) = -int_{-inf}^{lambda} count(mu) d mu, midpoint rule on the step function
    const double lambda = -0.02;
    const int n = 20000;
    const double lo = -0.3, dm = (lambda - lo) / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += s.count(lo + (i + 0.5) * dm) * dm;
    CHECK(s.trace(lambda) == doctest::Approx(-acc).epsilon(1e-3));
    double prev = 0.0;
    for (double mu = -0.3; mu < 0.0; mu += 0.001) {
        CHECK(s.count(mu) >= prev);
        prev = s.count(mu);
    }
}

TEST_CASE("truncated angular momentum is rejected") {
    SpectrumOptions o;
    o.h = 2e-3;
    o.r_max = 40.0;
    o.l_max = 0;
    o.coulomb_charge = 1.0;
    CHECK_THROWS_AS(radial_spectrum([](double r) { return 1.0 / r; }, 1, o), DomainError);
}

TEST_CASE("remainder scales") {
    CHECK(zeta_bar(1e-3, 10.0, 10.0) > 0.0);
    const auto s = remainder_scales(solve_atom(10.0, 10.0, 1), std::numeric_limits<double>::infinity());
    CHECK(s.r.size() == s.zeta.size());
    CHECK(s.R == doctest::Approx(std::pow(10.0, 5.0 / 3.0)));
    CHECK(s.R0 > 0.0);
    CHECK(s.zeta_ratio_max > 0.0);
    // R = Z^2 below a = 1/Z
    CHECK(remainder_scales(solve_atom(10.0, 10.0, 1), 0.01).R == doctest::Approx(100.0));
    // R0 / Z^{2/3} is the same for every Z (TF scaling); frozen value
    const double c1 = remainder_scales(solve_atom(1.0, 1.0, 1), 1.0).R0_scaled;
    for (double Z : {10.0, 100.0})
        CHECK(remainder_scales(solve_atom(Z, Z, 1), 1.0).R0_scaled == doctest::Approx(c1).epsilon(1e-9));
}
