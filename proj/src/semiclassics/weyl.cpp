#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tflab/error.hpp"
#include "tflab/molecule.hpp"
#include "tflab/semiclassics.hpp"
#include "tflab/thermo.hpp"

namespace tflab {
namespace {

constexpr double kPi = std::numbers::pi;
// log-radius range relative to the scale
constexpr double kInner = 1e-12;
constexpr double kOuter = 1e8;

}  // namespace

WeylTerms weyl_terms(const RadialFunction& W, double nu, double q, double scale, const std::vector<double>& breaks) {
    if (!(nu <= 0.0)) throw DomainError("weyl_terms: nu must be <= 0");
    if (!(scale > 0.0)) throw DomainError("weyl_terms: scale must be positive");
    const double u_lo = std::log(kInner * scale), u_hi = std::log(kOuter * scale);
    std::vector<double> cuts{u_lo};
    for (double b : breaks)
        if (b > 0.0 && std::isfinite(b)) {
            const double u = std::log(b);
            if (u > u_lo && u < u_hi) cuts.push_back(u);
        }
    cuts.push_back(u_hi);
    std::sort(cuts.begin(), cuts.end());

    // in u = ln r the measure is 4 pi r^3 du
    auto measure = [&](double u) {
        const double r = std::exp(u);
        return std::pair{4.0 * kPi * r * r * r, W(r) + nu};
    };
    auto count_f = [&](double u) {
        const auto [m, w] = measure(u);
        return m * pressure_prime(w, q);
    };
    auto trace_f = [&](double u) {
        const auto [m, w] = measure(u);
        return m * pressure(w, q);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    WeylTerms out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        out.count += GK::integrate(count_f, cuts[i], cuts[i + 1], 20, 1e-12);
        out.trace -= GK::integrate(trace_f, cuts[i], cuts[i + 1], 20, 1e-12);
    }
    // below u_lo the integrands behave like e^{alpha u}; add that piece in closed form
    auto inner = [&](const auto& f) {
        const double g0 = f(u_lo), g1 = f(u_lo + 1.0);
        if (!(g0 > 0.0) || !(g1 > g0)) return 0.0;
        return g0 / std::log(g1 / g0);
    };
    out.count += inner(count_f);
    out.trace -= inner(trace_f);
    const double edge = count_f(u_hi);
    if (edge > 1e-10 * std::max(out.count, 1e-300) && edge > 0.0)
        throw DivergenceError("weyl_terms: W + nu does not decay fast enough for a finite count");
    return out;
}

WeylTerms weyl_terms(const AtomicTFSolution& sol, double nu) {
    if (sol.empty()) throw DomainError("weyl_terms: empty atom");
    return weyl_terms([&](double r) { return sol.W(r); }, nu, sol.q(), sol.length_scale(), {sol.r_bar()});
}

WeylTerms weyl_terms(const MolecularTFSolution& sol) {
    const auto s = sol.disc->sums(sol.delta, sol.nu);
    return {s.charge, -s.pressure};
}

}  // namespace tflab
