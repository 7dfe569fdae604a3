#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "tflab/error.hpp"
#include "tflab/json_util.hpp"
#include "tflab/trajectories.hpp"

namespace tflab {
namespace {

constexpr double kPi = std::numbers::pi;

std::pair<double, double> solve(const std::function<double(double)>& f, double lo, double hi) {
    boost::math::tools::eps_tolerance<double> tol(52);
    std::uintmax_t it = 200;
    return boost::math::tools::toms748_solve(f, lo, hi, tol, it);
}

double start_radius(const CentralPotential& pot) { return pot.r_min() > 0.0 ? pot.r_min() * 1.0001 : 1e-8; }

// Pi sum_k h(t_k) / n at the Chebyshev nodes, doubled until converged.
double chebyshev(const std::function<double(double)>& h) {
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t n = 64; n <= (std::size_t(1) << 18); n *= 2) {
        double s = 0.0;
        for (std::size_t k = 1; k <= n; ++k) s += h(std::cos((2.0 * double(k) - 1.0) * kPi / (2.0 * double(n))));
        s *= kPi / double(n);
        if (std::abs(s - prev) <= 1e-13 * std::abs(s)) return s;
        prev = s;
    }
    return prev;
}

}  // namespace

CircularOrbit circular_orbit(const CentralPotential& pot, double nu, bool paper_factor2) {
    auto crit = [&](double r) { return 2.0 * (pot.W(r) + nu) + r * pot.dW(r); };
    double lo = start_radius(pot);
    if (!(crit(lo) > 0.0)) throw DomainError("circular_orbit: no bound motion at this level");
    double hi = lo;
    for (;;) {
        const double next = hi * 1.25;
        if (next > pot.r_max() || next > 1e15 * lo)
            throw DomainError("circular_orbit: no root bracketed inside the potential range");
        if (crit(next) <= 0.0) {
            lo = hi;
            hi = next;
            break;
        }
        hi = next;
    }
    const auto root = solve(crit, lo, hi);
    CircularOrbit c;
    c.r0 = 0.5 * (root.first + root.second);
    const double w1 = pot.dW(c.r0), w2 = pot.d2W(c.r0);
    c.M = std::sqrt(-c.r0 * c.r0 * c.r0 * w1 / 2.0) * (paper_factor2 ? std::sqrt(2.0) : 1.0);
    c.phi0 = kPi * std::sqrt(w1 / (3.0 * w1 + c.r0 * w2));
    c.exceeds_pi = c.phi0 > kPi;
    return c;
}

RotationResult rotation_number(const CentralPotential& pot, double M, double nu, const RotationOptions& opt) {
    if (!(M > 0.0)) throw DomainError("rotation_number: M must be positive");
    // The factor-2 radicand equals the plain one at angular momentum M / sqrt 2.
    const double m = opt.paper_factor2 ? M / std::sqrt(2.0) : M;
    const CircularOrbit circ = circular_orbit(pot, nu, false);
    auto g = [&](double r) { return r * r * (pot.W(r) + nu) - m * m; };
    const double top = g(circ.r0);
    if (!(top > 0.0)) throw DomainError("rotation_number: M exceeds the circular-orbit maximum for this level");

    RotationResult res;
    res.M = M;
    res.nu = nu;
    const double lo = start_radius(pot);
    if (!(g(lo) < 0.0)) throw DomainError("rotation_number: inner turning point below the potential range");
    auto inner = solve(g, lo, circ.r0);
    double hi = circ.r0;
    while (g(hi) > 0.0) {
        hi *= 1.5;
        if (hi > pot.r_max() || hi > 1e15 * circ.r0) throw DomainError("rotation_number: outer turning point beyond the potential range");
    }
    auto outer = solve(g, circ.r0, hi);
    res.r1 = 0.5 * (inner.first + inner.second);
    res.r2 = 0.5 * (outer.first + outer.second);
    res.is_circular = res.r2 - res.r1 < 1e-8 * circ.r0;

    // r = c + d t; W + nu - m^2/r^2 = d^2 (1 - t^2) G(t)
    const double c = 0.5 * (res.r1 + res.r2), d = 0.5 * (res.r2 - res.r1);
    // Within 1e-6 r_end of a turning point the quotient is all rounding; use its first-order limit.
    auto slope = [&](double r) { return pot.dW(r) + 2.0 * m * m / (r * r * r); };
    const double g_lo = slope(res.r1) / (2.0 * d), g_hi = -slope(res.r2) / (2.0 * d);
    const double cut_lo = 1e-6 * res.r1 / d, cut_hi = 1e-6 * res.r2 / d;
    auto G = [&](double t) {
        if (1.0 + t < cut_lo) return std::max(g_lo, 1e-300);
        if (1.0 - t < cut_hi) return std::max(g_hi, 1e-300);
        const double r = c + d * t;
        const double f = pot.W(r) + nu - m * m / (r * r);
        return std::max(f / (d * d * (1.0 - t) * (1.0 + t)), 1e-300);
    };
    if (res.is_circular) {
        res.phi_quad = circ.phi0;
    } else {
        res.phi_quad = chebyshev([&](double t) {
            const double r = c + d * t;
            return m / (r * r * std::sqrt(G(t)));
        });
        res.radial_period = chebyshev([&](double t) { return 1.0 / std::sqrt(G(t)); });
    }
    res.phi_orbit = std::numeric_limits<double>::quiet_NaN();
    if (opt.integrate && !res.is_circular) {
        OrbitState s;
        s.x = {res.r1, 0.0};
        s.p = {0.0, m / res.r1};
        // the pericentre sets the time scale: angular rate 2 m / r1^2
        const double span = 0.5 * res.radial_period * (double(opt.half_orbits) + 0.5);
        double dt = std::min(res.radial_period / double(opt.steps_per_period), 0.01 * res.r1 * res.r1 / (2.0 * m));
        dt = std::max(dt, span / double(opt.max_steps));
        const OrbitResult orb = integrate_orbit(pot, s, nu, span, dt, 0);
        res.phi_orbit = orb.mean_half_angle;
        res.energy_drift = orb.energy_drift;
    }
    return res;
}

nlohmann::json RotationResult::to_json() const {
    return {{"M", jnum(M)},
            {"nu", jnum(nu)},
            {"r1", jnum(r1)},
            {"r2", jnum(r2)},
            {"phi_quad", jnum(phi_quad)},
            {"phi_orbit", jnum(phi_orbit)},
            {"radial_period", jnum(radial_period)},
            {"energy_drift", jnum(energy_drift)},
            {"is_circular", is_circular}};
}

nlohmann::json CircularOrbit::to_json() const {
    return {{"r0", jnum(r0)}, {"M", jnum(M)}, {"phi0", jnum(phi0)}, {"phi0_exceeds_pi", exceeds_pi}};
}

std::string rotation_csv(const std::vector<RotationResult>& rows) {
    std::ostringstream os;
    os.precision(12);
    os << "M,nu,r1,r2,phi_quad,phi_orbit\n";
    for (const auto& r : rows)
        os << r.M << ',' << r.nu << ',' << r.r1 << ',' << r.r2 << ',' << r.phi_quad << ',' << r.phi_orbit << '\n';
    return os.str();
}

}  // namespace tflab
