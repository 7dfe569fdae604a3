#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "tflab/error.hpp"
#include "tflab/trajectories.hpp"

namespace tflab {

// f(u) = r W(r) with u = ln r.
struct CentralPotential::Spline {
    boost::math::interpolators::cardinal_cubic_b_spline<double> f;
};

CentralPotential CentralPotential::coulomb(double Z) {
    if (!(Z > 0.0)) throw DomainError("coulomb potential: Z must be positive");
    CentralPotential p;
    p.name_ = "coulomb";
    p.coulomb_ = Z;
    p.r_min_ = 0.0;
    p.r_max_ = std::numeric_limits<double>::infinity();
    return p;
}

CentralPotential CentralPotential::from_samples(const std::vector<double>& r, const std::vector<double>& W) {
    if (r.size() != W.size() || r.size() < 8) throw DomainError("central potential: need >= 8 matching samples");
    if (!(r.front() > 0.0)) throw DomainError("central potential: radii must be positive");
    const double du = std::log(r[1] / r[0]);
    if (!(du > 0.0)) throw DomainError("central potential: radii must increase");
    for (std::size_t i = 1; i < r.size(); ++i)
        if (std::abs(std::log(r[i] / r[i - 1]) - du) > 1e-9 * du)
            throw DomainError("central potential: radii must be log-uniform");
    std::vector<double> f(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) f[i] = r[i] * W[i];
    CentralPotential p;
    p.name_ = "spline";
    p.r_min_ = r.front();
    p.r_max_ = r.back();
    p.spline_ = std::make_shared<const Spline>(
        Spline{boost::math::interpolators::cardinal_cubic_b_spline<double>(f.data(), f.size(), std::log(r[0]), du)});
    return p;
}

CentralPotential CentralPotential::from_atom(const AtomicTFSolution& sol, std::size_t samples) {
    if (sol.empty()) throw DomainError("central potential: empty atom");
    const double lo = 1e-6 * sol.length_scale(), hi = 1e4 * sol.length_scale();
    std::vector<double> r(samples), W(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        r[i] = lo * std::pow(hi / lo, double(i) / double(samples - 1));
        W[i] = sol.W(r[i]);
    }
    CentralPotential p = from_samples(r, W);
    p.name_ = "tf-atom";
    return p;
}

void CentralPotential::check(double r) const {
    if (!(r >= r_min_ && r <= r_max_) || !(r > 0.0))
        throw DomainError("central potential evaluated outside its range at r = " + std::to_string(r));
}

double CentralPotential::W(double r) const {
    check(r);
    if (!spline_) return coulomb_ / r;
    return spline_->f(std::log(r)) / r;
}

double CentralPotential::dW(double r) const {
    check(r);
    if (!spline_) return -coulomb_ / (r * r);
    const double u = std::log(r);
    return (spline_->f.prime(u) - spline_->f(u)) / (r * r);
}

double CentralPotential::d2W(double r) const {
    check(r);
    if (!spline_) return 2.0 * coulomb_ / (r * r * r);
    const double u = std::log(r);
    return (spline_->f.double_prime(u) - 3.0 * spline_->f.prime(u) + 2.0 * spline_->f(u)) / (r * r * r);
}

ConvexityReport convexity(const CentralPotential& pot, double r_lo, double r_hi, std::size_t n) {
    if (!(r_lo > 0.0 && r_hi > r_lo) || n < 2) throw DomainError("convexity: need 0 < r_lo < r_hi");
    ConvexityReport c;
    c.max_dW = -std::numeric_limits<double>::infinity();
    c.min_laplace = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = r_lo * std::pow(r_hi / r_lo, double(i) / double(n - 1));
        const double d1 = pot.dW(r);
        const double lap = pot.d2W(r) + 2.0 * d1 / r;  // (r^2 W')' / r^2
        c.max_dW = std::max(c.max_dW, d1);
        c.min_laplace = std::min(c.min_laplace, lap);
        c.decreasing = c.decreasing && d1 < 0.0;
        c.subharmonic = c.subharmonic && lap > 0.0;
        ++c.samples;
    }
    return c;
}

}  // namespace tflab
