#include <cmath>
#include <numbers>

#include <doctest.h>

#include "tflab/config.hpp"
#include "tflab/error.hpp"
#include "tflab/json_util.hpp"
#include "tflab/thermo.hpp"

using namespace tflab;

namespace {

constexpr double kPi = std::numbers::pi;

// sup_w (w rho - P(w)) by golden-section search; independent of the closed form.
double legendre_oracle(double rho, double q) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = 1.0;
    while (hi * pressure_prime(hi, q) < 2.0 * rho * hi) hi *= 2.0;
    hi *= 4.0;
    auto f = [&](double w) { return w * rho - pressure(w, q); };
    double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    for (int it = 0; it < 200; ++it) {
        if (f(a) > f(b)) hi = b;
        else lo = a;
        a = hi - g * (hi - lo);
        b = lo + g * (hi - lo);
    }
    return f(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("pressure closed form") {
    CHECK(pressure(1.0, 1) == doctest::Approx(1.0 / (15.0 * kPi * kPi)).epsilon(1e-15));
    CHECK(pressure_prime(4.0, 2) == doctest::Approx(2.0 * 8.0 / (6.0 * kPi * kPi)).epsilon(1e-15));
    CHECK(pressure(-1.0, 1) == 0.0);
    CHECK(pressure_prime(0.0, 1) == 0.0);
    // P' is the derivative of P
    const double w = 0.7, e = 1e-6;
    CHECK((pressure(w + e, 1) - pressure(w - e, 1)) / (2 * e) == doctest::Approx(pressure_prime(w, 1)).epsilon(1e-9));
    CHECK((pressure_prime(w + e, 3) - pressure_prime(w - e, 3)) / (2 * e) ==
          doctest::Approx(pressure_second(w, 3)).epsilon(1e-9));
}

TEST_CASE("kinetic density is the Legendre transform of P") {
    for (int q : {1, 2}) {
        for (double rho : {1e-3, 0.05, 1.0, 40.0}) {
            CHECK(kinetic_density(rho, q) == doctest::Approx(legendre_oracle(rho, q)).epsilon(1e-9));
            const double w = depth_for_density(rho, q);
            CHECK(pressure_prime(w, q) == doctest::Approx(rho).epsilon(1e-12));
            CHECK(kinetic_at_depth(w, q) == doctest::Approx(kinetic_density(rho, q)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(kinetic_density(-1.0, 1), DomainError);
}

TEST_CASE("configuration validation and JSON round trip") {
    const auto c = NuclearConfiguration::create({1.0, 2.0}, {Vec3{0, 0, 0}, Vec3{0, 0, 3}}, 2.5, 2);
    CHECK(c.total_charge() == 3.0);
    CHECK(c.min_distance() == doctest::Approx(3.0));
    CHECK(c.half_min_distance() == doctest::Approx(1.5));
    const auto back = NuclearConfiguration::from_json(c.to_json());
    CHECK(back.charges() == c.charges());
    CHECK(back.positions() == c.positions());
    CHECK(back.electron_count() == 2.5);
    CHECK(back.spin_factor() == 2);
    CHECK(canonical_dump(back.to_json()) == canonical_dump(c.to_json()));

    CHECK_THROWS_AS(NuclearConfiguration::create({1.0}, {}, 1.0), DomainError);
    CHECK_THROWS_AS(NuclearConfiguration::create({-1.0}, {Vec3{}}, 1.0), DomainError);
    CHECK_THROWS_AS(NuclearConfiguration::create({1.0, 1.0}, {Vec3{}, Vec3{}}, 1.0), DomainError);
    CHECK_THROWS_AS(NuclearConfiguration::create({1.0}, {Vec3{}}, -1.0), DomainError);
    CHECK_THROWS_AS(NuclearConfiguration::from_json(nlohmann::json{{"Z", "x"}}), std::exception);
}

TEST_CASE("bare potential and repulsion") {
    const auto c = NuclearConfiguration::create({1.0, 2.0}, {Vec3{0, 0, 0}, Vec3{0, 0, 2}}, 3.0);
    const auto pr = bare_potential_and_repulsion(c, Vec3{0, 0, 1});
    CHECK(pr.V == doctest::Approx(3.0));
    CHECK(pr.U == doctest::Approx(1.0));
    CHECK(nuclear_repulsion(c) == doctest::Approx(1.0));
    CHECK_THROWS_AS(bare_potential_and_repulsion(c, Vec3{0, 0, 2}), SingularityError);
}

TEST_CASE("report numbers are rounded to 12 significant digits") {
    CHECK(round12(1.0 / 3.0) == 0.333333333333);
    CHECK(round12(0.0) == 0.0);
    CHECK(jnum(std::nan("")).is_string());
    CHECK(canonical_dump(nlohmann::json{{"b", 1}, {"a", 2}}) == "{\n  \"a\": 2,\n  \"b\": 1\n}\n");
}
