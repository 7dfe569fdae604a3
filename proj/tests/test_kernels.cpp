#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "tflab/kernels.hpp"
#include "tflab/parallel.hpp"

using namespace tflab;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

void check_close(const char* what, const std::vector<double>& a, const std::vector<double>& b, double tol) {
    INFO(std::string(what));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (tol == 0.0) CHECK(a[i] == b[i]);
        else CHECK(a[i] == doctest::Approx(b[i]).epsilon(tol).scale(1.0));
    }
}

}  // namespace

TEST_CASE("scalar and AVX2 kernels agree") {
    const kernels::Table& s = kernels::scalar_table();
    const kernels::Table* v = kernels::avx2_table();
    if (!v) {
        MESSAGE("AVX2 kernels not available on this build or CPU");
        return;
    }
    std::mt19937_64 rng(7);
    // odd sizes exercise the remainder loops
    for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
        const auto a = random_vec(n, rng), b = random_vec(n, rng);
        CHECK(v->dot(a.data(), b.data(), n) == doctest::Approx(s.dot(a.data(), b.data(), n)).epsilon(1e-13).scale(1.0));

        auto y1 = b, y2 = b;
        s.axpy(0.3, a.data(), y1.data(), n);
        v->axpy(0.3, a.data(), y2.data(), n);
        check_close("axpy", y1, y2, 1e-15);

        y1 = b;
        y2 = b;
        s.xpby(a.data(), -1.7, y1.data(), n);
        v->xpby(a.data(), -1.7, y2.data(), n);
        check_close("xpby", y1, y2, 1e-15);

        std::vector<double> m1(n), m2(n);
        s.mul(a.data(), b.data(), m1.data(), n);
        v->mul(a.data(), b.data(), m2.data(), n);
        check_close("mul", m1, m2, 0.0);

        // depths of both signs, including exact zeros
        auto pot = random_vec(n, rng, 0.0, 3.0), phi = random_vec(n, rng, 0.0, 3.0);
        if (n > 2) phi[1] = pot[1];
        std::vector<double> r1(n), r2(n), d1(n), d2(n);
        s.tf_density(pot.data(), phi.data(), -0.2, 0.05, r1.data(), d1.data(), n);
        v->tf_density(pot.data(), phi.data(), -0.2, 0.05, r2.data(), d2.data(), n);
        check_close("rho", r1, r2, 1e-14);
        check_close("drho", d1, d2, 1e-14);
        const auto w = random_vec(n, rng, 0.0, 1.0);
        CHECK(v->tf_power52_sum(pot.data(), phi.data(), -0.2, w.data(), n) ==
              doctest::Approx(s.tf_power52_sum(pot.data(), phi.data(), -0.2, w.data(), n)).epsilon(1e-13));
    }
}

TEST_CASE("stencil row kernels agree") {
    const kernels::Table* v = kernels::avx2_table();
    if (!v) return;
    std::mt19937_64 rng(11);
    for (std::size_t n : {3u, 6u, 9u, 67u}) {
        const auto x = random_vec(n, rng), sv = random_vec(n, rng), nv = random_vec(n, rng), bv = random_vec(n, rng),
                   tv = random_vec(n, rng), axm = random_vec(n, rng, 0.5, 2.0), axp = random_vec(n, rng, 0.5, 2.0),
                   wx = random_vec(n, rng, 0.1, 1.0), diag = random_vec(n, rng, 0.0, 1.0);
        std::vector<double> y1(n, 0.0), y2(n, 0.0);
        kernels::StencilRow row;
        row.n = n;
        row.x = x.data();
        row.s = sv.data();
        row.north = nv.data();
        row.b = bv.data();
        row.t = tv.data();
        row.axm = axm.data();
        row.axp = axp.data();
        row.wx = wx.data();
        row.diag = diag.data();
        row.syz = 0.7;
        row.cym = 1.1;
        row.cyp = 0.9;
        row.czm = 1.3;
        row.czp = 0.8;
        row.y = y1.data();
        kernels::scalar_table().stencil_row(row);
        row.y = y2.data();
        v->stencil_row(row);
        check_close("stencil", y1, y2, 1e-14);
        row.diag = nullptr;
        row.y = y1.data();
        kernels::scalar_table().stencil_row(row);
        row.y = y2.data();
        v->stencil_row(row);
        check_close("stencil", y1, y2, 1e-14);
    }
}

TEST_CASE("parallel sum does not depend on the worker count") {
    std::vector<double> a(100000);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::sin(double(i)) * 1e-3 + 1.0 / double(i + 1);
    auto run = [&] {
        return parallel_sum(a.size(), [&](std::size_t b, std::size_t e) {
            double acc = 0.0;
            for (std::size_t i = b; i < e; ++i) acc += a[i];
            return acc;
        });
    };
    set_worker_count(1);
    const double one = run();
    set_worker_count(5);
    const double five = run();
    set_worker_count(0);
    CHECK(one == five);
}
