#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "tflab/error.hpp"
#include "tflab/trajectories.hpp"

namespace tflab {
namespace {

struct Flow {
    const CentralPotential& pot;

    double energy(const OrbitState& s) const {
        const double r = std::hypot(s.x[0], s.x[1]);
        return s.p[0] * s.p[0] + s.p[1] * s.p[1] - pot.W(r);
    }
    void drift(OrbitState& s, double h) const {
        s.x[0] += 2.0 * h * s.p[0];
        s.x[1] += 2.0 * h * s.p[1];
    }
    void kick(OrbitState& s, double h) const {
        const double r = std::hypot(s.x[0], s.x[1]);
        const double g = pot.dW(r) / r;
        s.p[0] += h * g * s.x[0];
        s.p[1] += h * g * s.x[1];
    }
    // Yoshida fourth-order composition
    void step(OrbitState& s, double h) const {
        static const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
        static const double w0 = -std::cbrt(2.0) * w1;
        drift(s, 0.5 * w1 * h);
        kick(s, w1 * h);
        drift(s, 0.5 * (w0 + w1) * h);
        kick(s, w0 * h);
        drift(s, 0.5 * (w0 + w1) * h);
        kick(s, w1 * h);
        drift(s, 0.5 * w1 * h);
    }
};

double radial_momentum(const OrbitState& s) {
    return (s.x[0] * s.p[0] + s.x[1] * s.p[1]) / std::hypot(s.x[0], s.x[1]);
}

}  // namespace

OrbitResult integrate_orbit(const CentralPotential& pot, const OrbitState& init, double shell, double t_span, double dt,
                            std::size_t sample_every) {
    if (!(dt > 0.0) || !(t_span > 0.0)) throw DomainError("integrate_orbit: need positive dt and span");
    const Flow flow{pot};
    OrbitResult out;
    out.energy = flow.energy(init);
    if (std::abs(out.energy - shell) > 1e-10 * std::max(1.0, std::abs(shell)))
        throw DomainError("integrate_orbit: initial state is off the energy shell");
    const double scale = std::max(std::abs(out.energy), 1e-300);

    OrbitState s = init;
    double t = 0.0;
    double angle = std::atan2(s.x[1], s.x[0]);  // unwrapped polar angle
    const auto steps = std::size_t(std::ceil(t_span / dt));
    if (sample_every) out.samples.push_back({0.0, s});
    const double p_norm = std::hypot(s.p[0], s.p[1]);
    const bool start_apsis = std::abs(radial_momentum(s)) <= 1e-12 * std::max(p_norm, 1e-300);
    if (start_apsis) {
        out.apsis_times.push_back(0.0);
        out.apsis_angles.push_back(angle);
        out.apsis_radii.push_back(std::hypot(s.x[0], s.x[1]));
    }
    for (std::size_t n = 0; n < steps; ++n) {
        const OrbitState prev = s;
        flow.step(s, dt);
        const double before = std::atan2(prev.x[1], prev.x[0]);
        double turn = std::atan2(s.x[1], s.x[0]) - before;
        if (turn > std::numbers::pi) turn -= 2.0 * std::numbers::pi;
        if (turn < -std::numbers::pi) turn += 2.0 * std::numbers::pi;

        const double pr0 = radial_momentum(prev), pr1 = radial_momentum(s);
        if (!(start_apsis && n == 0) && pr0 != 0.0 && (pr0 < 0.0) != (pr1 < 0.0)) {
            // the apsis inside this step: root of p_r along a partial step from prev
            auto f = [&](double tau) {
                OrbitState q = prev;
                flow.step(q, tau);
                return radial_momentum(q);
            };
            boost::math::tools::eps_tolerance<double> tol(50);
            std::uintmax_t it = 60;
            const auto root = boost::math::tools::toms748_solve(f, 0.0, dt, pr0, pr1, tol, it);
            const double tau = 0.5 * (root.first + root.second);
            OrbitState q = prev;
            flow.step(q, tau);
            double part = std::atan2(q.x[1], q.x[0]) - before;
            if (part > std::numbers::pi) part -= 2.0 * std::numbers::pi;
            if (part < -std::numbers::pi) part += 2.0 * std::numbers::pi;
            out.apsis_times.push_back(t + tau);
            out.apsis_angles.push_back(angle + part);
            out.apsis_radii.push_back(std::hypot(q.x[0], q.x[1]));
        }
        angle += turn;
        t += dt;
        out.energy_drift = std::max(out.energy_drift, std::abs(flow.energy(s) - out.energy) / scale);
        if (sample_every && (n + 1) % sample_every == 0) out.samples.push_back({t, s});
    }
    out.steps = steps;
    for (std::size_t i = 1; i < out.apsis_angles.size(); ++i)
        out.half_angles.push_back(out.apsis_angles[i] - out.apsis_angles[i - 1]);
    if (!out.half_angles.empty()) {
        double sum = 0.0;
        for (double a : out.half_angles) sum += a;
        out.mean_half_angle = sum / double(out.half_angles.size());
    }
    return out;
}

std::string OrbitResult::csv() const {
    std::ostringstream os;
    os.precision(12);
    os << "t,x,y,px,py\n";
    for (const auto& smp : samples)
        os << smp.t << ',' << smp.s.x[0] << ',' << smp.s.x[1] << ',' << smp.s.p[0] << ',' << smp.s.p[1] << '\n';
    return os.str();
}

}  // namespace tflab
