#include <cmath>
#include <limits>

#include <doctest.h>

#include "tflab/bounds.hpp"
#include "tflab/error.hpp"

using namespace tflab;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("negative side worked numbers for Z = 100") {
    const auto r = negative_side_report(100.0, 100.0, kInf);
    const double Q = std::pow(100.0, 5.0 / 3.0) * std::pow(100.0, -0.1);
    CHECK(r.Q == doctest::Approx(Q).epsilon(1e-12));
    CHECK(r.Q == doctest::Approx(1359.4).epsilon(1e-4));
    CHECK(r.excess_bound == doctest::Approx(std::pow(Q, 3.0 / 7.0)).epsilon(1e-12));
    CHECK(r.excess_bound == doctest::Approx(22.0).epsilon(2e-3));
    CHECK(r.ionization_bound == doctest::Approx(std::pow(100.0, 20.0 / 21.0)).epsilon(1e-12));
    CHECK(r.ionization_bound == doctest::Approx(80.3).epsilon(1e-3));
    CHECK(r.b == doctest::Approx(0.357).epsilon(2e-3));
    CHECK(r.lambda_bound == doctest::Approx(std::pow(100.0, 8.0 / 9.0)).epsilon(1e-12));
    CHECK(r.lambda_bound == doctest::Approx(59.9).epsilon(1e-3));
}

TEST_CASE("Q branches") {
    BoundConstants k;
    // a below Z^{-1/3}
    CHECK(excess_scale_Q(8.0, 8.0, 0.4, k) == doctest::Approx(32.0).epsilon(1e-14));
    const double a = 2.0;
    CHECK(excess_scale_Q(8.0, 8.0, a, k) ==
          doctest::Approx(32.0 * (std::pow(8.0, -0.1) + std::pow(a * 2.0, -0.1))).epsilon(1e-14));
    k.n_branch = true;
    CHECK(excess_scale_Q(8.0, 4.0, a, k) ==
          doctest::Approx(32.0 * (std::pow(4.0, -0.1) + std::pow(a * 2.0, -0.1))).epsilon(1e-14));
    // nondecreasing in Q as a shrinks
    BoundConstants d;
    double prev = 0.0;
    for (double aa : {100.0, 10.0, 1.0, 0.6}) {
        const double b = negative_side_report(8.0, 8.0, aa, d).excess_bound;
        CHECK(b >= prev);
        prev = b;
    }
}

TEST_CASE("positive side worked numbers") {
    const auto p = positive_side_report(100.0, 90.0, kInf);
    CHECK(p.Q == doctest::Approx(std::pow(100.0, 5.0 / 3.0)).epsilon(1e-14));
    CHECK(p.r_bar == doctest::Approx(std::pow(10.0, -1.0 / 3.0)).epsilon(1e-14));
    CHECK(p.r_bar == doctest::Approx(0.4642).epsilon(1e-4));
    CHECK(p.upsilon == doctest::Approx(31.6).epsilon(2e-3));
    CHECK(p.window == doctest::Approx(p.window_theorem).epsilon(1e-12));
    CHECK(p.window == doctest::Approx(std::pow(100.0, 5.0 / 18.0) * std::pow(10.0, 17.0 / 18.0)).epsilon(1e-12));
    CHECK(p.Theta == doctest::Approx(p.Theta_scaling).epsilon(1e-12));
    CHECK(p.min_distance_bound == doctest::Approx(std::pow(100.0, -5.0 / 21.0 + 0.1)).epsilon(1e-12));

    BoundConstants k;
    k.set("delta=0.05");
    k.set("delta1=0");
    const auto p2 = positive_side_report(100.0, 90.0, kInf, k);
    CHECK(p2.positive_excess_bound == doctest::Approx(21.3).epsilon(2e-3));
    CHECK(p2.min_distance_bound == doctest::Approx(0.334).epsilon(2e-3));
    CHECK_THROWS_AS(positive_side_report(10.0, 10.0, kInf), DomainError);
}

TEST_CASE("window grows with the ionization degree") {
    double prev = 0.0;
    for (double N : {99.0, 95.0, 80.0, 50.0}) {
        const double w = positive_side_report(100.0, N, kInf).window;
        CHECK(w > prev);
        prev = w;
    }
}

TEST_CASE("constant overrides") {
    BoundConstants k;
    k.set("C=2.5");
    k.set("refined_q=true");
    CHECK(k.C == 2.5);
    CHECK(k.refined_q);
    CHECK_THROWS_AS(k.set("nonsense=1"), DomainError);
    CHECK_THROWS_AS(k.set("C"), DomainError);
    CHECK_THROWS_AS(k.set("C=abc"), DomainError);
    const auto j = negative_side_report(10.0, 10.0, kInf, k).to_json();
    CHECK(j["constants"]["C"] == 2.5);
}
