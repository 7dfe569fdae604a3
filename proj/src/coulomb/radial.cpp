#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "tflab/coulomb.hpp"
#include "tflab/error.hpp"

namespace tflab {
namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Exponent of a power law through the first two samples, clamped to keep r^2 f integrable.
double inner_exponent(const std::vector<double>& r, const std::vector<double>& f) {
    if (r.size() < 2 || !(f[0] > 0.0) || !(f[1] > 0.0)) return 0.0;
    const double p = std::log(f[1] / f[0]) / std::log(r[1] / r[0]);
    return std::clamp(p, -2.5, 10.0);
}

struct Stencil {
    std::size_t first = 0;
    std::array<double, 4> c{};
    int size = 0;
};

// Quadrature in t = ln r for each interval [r_i, r_{i+1}]. Runs of equal log steps use the
// four-point cubic rule; anything else falls back to the trapezoid.
std::vector<Stencil> interval_rules(const std::vector<double>& r) {
    const std::size_t n = r.size();
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = std::log(r[i + 1] / r[i]);
    auto uniform = [&](std::size_t a, std::size_t b) {
        for (std::size_t k = a + 1; k <= b; ++k)
            if (std::abs(h[k] - h[a]) > 1e-9 * h[a]) return false;
        return true;
    };
    std::vector<Stencil> out(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double u = h[i] / 24.0;
        Stencil& st = out[i];
        if (n >= 4 && i >= 1 && i + 2 < n && uniform(i - 1, i + 1))
            st = {i - 1, {-u, 13.0 * u, 13.0 * u, -u}, 4};
        else if (n >= 4 && i == 0 && uniform(0, 2))
            st = {0, {9.0 * u, 19.0 * u, -5.0 * u, u}, 4};
        else if (n >= 4 && i + 2 == n && uniform(i - 2, i))
            st = {i - 2, {u, -5.0 * u, 19.0 * u, 9.0 * u}, 4};
        else
            st = {i, {0.5 * h[i], 0.5 * h[i], 0.0, 0.0}, 2};
    }
    return out;
}

std::vector<double> interval_integrals(const std::vector<double>& r, const std::vector<double>& g) {
    const auto rules = interval_rules(r);
    std::vector<double> out(rules.size());
    for (std::size_t i = 0; i < rules.size(); ++i) {
        double s = 0.0;
        for (int k = 0; k < rules[i].size; ++k) s += rules[i].c[std::size_t(k)] * g[rules[i].first + std::size_t(k)];
        out[i] = s;
    }
    return out;
}

}  // namespace

RadialDensity::RadialDensity(std::vector<double> radii, std::vector<double> values)
    : r(std::move(radii)), f(std::move(values)) {
    if (r.size() != f.size() || r.size() < 2) throw DomainError("radial density: size mismatch");
    if (!(r[0] > 0.0)) throw DomainError("radial density: radii must be positive");
    for (std::size_t i = 1; i < r.size(); ++i)
        if (!(r[i] > r[i - 1])) throw DomainError("radial density: radii must increase");
}

std::vector<double> RadialDensity::weights() const {
    std::vector<double> w(r.size(), 0.0);
    for (const auto& st : interval_rules(r))
        for (int k = 0; k < st.size; ++k) {
            const std::size_t j = st.first + std::size_t(k);
            w[j] += st.c[std::size_t(k)] * kFourPi * r[j] * r[j] * r[j];
        }
    // inner piece: f ~ f_0 (r / r_0)^p on [0, r_0]
    const double p = inner_exponent(r, f);
    w[0] += kFourPi * r[0] * r[0] * r[0] / (3.0 + p);
    return w;
}

double RadialDensity::total() const {
    const auto w = weights();
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += w[i] * f[i];
    return s;
}

std::vector<double> RadialDensity::enclosed() const {
    const std::size_t n = r.size();
    std::vector<double> g(n), q(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = kFourPi * r[i] * r[i] * r[i] * f[i];
    const auto seg = interval_integrals(r, g);
    const double p = inner_exponent(r, f);
    q[0] = g[0] / (3.0 + p);
    for (std::size_t i = 1; i < n; ++i) q[i] = q[i - 1] + seg[i - 1];
    return q;
}

double RadialPotential::at(double radius) const {
    if (radius >= r.back()) return total_charge / radius;
    if (radius <= r.front()) {
        const double t = radius / r.front();
        return at_origin + t * (v.front() - at_origin);
    }
    const auto it = std::upper_bound(r.begin(), r.end(), radius);
    const std::size_t i = static_cast<std::size_t>(it - r.begin()) - 1;
    const double t = std::log(radius / r[i]) / std::log(r[i + 1] / r[i]);
    return v[i] + t * (v[i + 1] - v[i]);
}

RadialPotential hartree_potential(const RadialDensity& f) {
    const std::size_t n = f.r.size();
    const auto q = f.enclosed();
    // tail_i = int_{r_i}^{R} 4 pi s f(s) ds
    std::vector<double> g(n), tail(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) g[i] = kFourPi * f.r[i] * f.r[i] * f.f[i];
    const auto seg = interval_integrals(f.r, g);
    for (std::size_t i = n - 1; i-- > 0;) tail[i] = tail[i + 1] + seg[i];
    RadialPotential out;
    out.r = f.r;
    out.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.v[i] = q[i] / f.r[i] + tail[i];
    out.total_charge = q.back();
    const double p = inner_exponent(f.r, f.f);
    out.at_origin = tail[0] + kFourPi * f.f[0] * f.r[0] * f.r[0] / (2.0 + p);
    return out;
}

double d_form(const RadialDensity& f, const RadialDensity& g) {
    if (f.r != g.r) throw DomainError("radial D: densities must share a grid");
    const std::size_t n = f.r.size();
    const auto qf = f.enclosed();
    const auto qg = g.enclosed();
    // D(f, g) = int 4 pi r (f Q_g + g Q_f) dr
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = std::log(f.r[i + 1] / f.r[i]);
        auto term = [&](std::size_t k) { return f.r[k] * f.r[k] * (f.f[k] * qg[k] + g.f[k] * qf[k]); };
        s += 0.5 * h * kFourPi * (term(i) + term(i + 1));
    }
    // inner piece: Q ~ r^{3+p}, so the integrand r (f Q_g + g Q_f) ~ r^{4+pf+pg}
    const double pf = inner_exponent(f.r, f.f), pg = inner_exponent(g.r, g.f);
    s += kFourPi * f.r[0] * (f.f[0] * qg[0] + g.f[0] * qf[0]) / (5.0 + pf + pg);
    return s;
}

}  // namespace tflab
