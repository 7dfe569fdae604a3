#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <lapacke.h>

#include "tflab/error.hpp"
#include "tflab/parallel.hpp"
#include "tflab/semiclassics.hpp"

namespace tflab {
namespace {

// Bump (1 - s^2)^2 on [-1, 1], normalized over the 10 Gauss-Legendre nodes.
struct Mollifier {
    std::array<double, 10> s{}, w{};
    Mollifier() {
        using GL = boost::math::quadrature::gauss<double, 10>;
        const auto& x = GL::abscissa();
        const auto& wt = GL::weights();
        std::size_t k = 0;
        double total = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (double sign : {1.0, -1.0}) {
                if (x[i] == 0.0 && sign < 0.0) continue;
                s[k] = sign * x[i];
                const double b = 1.0 - s[k] * s[k];
                w[k] = wt[i] * b * b;
                total += w[k];
                ++k;
            }
        }
        for (double& v : w) v /= total;
    }
};

std::vector<double> channel(const std::vector<double>& diag_base, const std::vector<double>& r, double h, int l,
                            double window) {
    const std::size_t n = r.size();
    const double ll = double(l) * double(l + 1);
    std::vector<double> d(n), e(n > 0 ? n - 1 : 0, -1.0 / (h * h));
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = diag_base[i] + ll / (r[i] * r[i]);
        lo = std::min(lo, d[i]);
    }
    lo -= 2.0 / (h * h) + 1.0;
    if (!(lo < window)) return {};
    std::vector<double> w(n);
    std::vector<lapack_int> iblock(n), isplit(n);
    lapack_int m = 0, nsplit = 0;
    const lapack_int info = LAPACKE_dstebz('V', 'E', lapack_int(n), lo, window, 0, 0, 0.0, d.data(), e.data(), &m,
                                           &nsplit, w.data(), iblock.data(), isplit.data());
    if (info != 0) throw ConvergenceError("radial_spectrum: dstebz failed with info " + std::to_string(info));
    w.resize(std::size_t(m));
    // the range is half-open (lo, window]
    while (!w.empty() && !(w.back() < window)) w.pop_back();
    return w;
}

}  // namespace

SpectralSummary radial_spectrum(const RadialFunction& W, double q, const SpectrumOptions& opt) {
    if (!(opt.h > 0.0) || !(opt.r_max > 10.0 * opt.h)) throw DomainError("radial_spectrum: need 0 < 10 h < r_max");
    if (!(q >= 1.0)) throw DomainError("radial_spectrum: q must be >= 1");
    const double h = opt.h;
    const std::size_t n = std::size_t(std::floor(opt.r_max / h)) - 1;
    std::vector<double> r(n), diag(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = h * double(i + 1);

    const double zc = opt.coulomb_charge;
    const double eps = opt.mollify_delta > 0.0 ? std::pow(h, 1.0 - opt.mollify_delta) : 0.0;
    static const Mollifier moll;
    double peak = 0.0;  // max r^2 (W - window)
    for (std::size_t i = 0; i < n; ++i) {
        double w;
        if (eps > 0.0) {
            double smooth = 0.0;
            for (std::size_t k = 0; k < moll.s.size(); ++k) {
                const double rho = std::max(std::abs(r[i] + eps * moll.s[k]), 1e-3 * eps);
                smooth += moll.w[k] * (W(rho) - zc / rho);
            }
            w = zc / r[i] + smooth;
        } else {
            w = W(r[i]);
        }
        diag[i] = 2.0 / (h * h) - w;
        peak = std::max(peak, r[i] * r[i] * (w - opt.window));
    }

    int l_top = opt.l_max;
    if (l_top < 0) {
        l_top = 0;
        while (double(l_top) * double(l_top + 1) < peak) ++l_top;
        --l_top;  // channel l_top + 1 has a nonnegative effective potential
        if (l_top < 0) l_top = 0;
    }

    SpectralSummary out;
    out.q = q;
    out.h = h;
    out.r_max = h * double(n + 1);
    out.eigenvalues.resize(std::size_t(l_top) + 1);
    parallel_chunks(out.eigenvalues.size(), [&](std::size_t l) {
        out.eigenvalues[l] = channel(diag, r, h, int(l), opt.window);
    });
    if (opt.l_max >= 0 && !out.eigenvalues.back().empty())
        throw DomainError("radial_spectrum: l_max = " + std::to_string(opt.l_max) +
                          " truncates the spectrum (that channel still has states below the window)");
    while (out.eigenvalues.size() > 1 && out.eigenvalues.back().empty()) out.eigenvalues.pop_back();
    return out;
}

double SpectralSummary::count(double lambda) const {
    double c = 0.0;
    for (std::size_t l = 0; l < eigenvalues.size(); ++l)
        for (double e : eigenvalues[l])
            if (e < lambda) c += degeneracy(l);
    return c;
}

double SpectralSummary::trace(double lambda) const {
    double t = 0.0;
    for (std::size_t l = 0; l < eigenvalues.size(); ++l) {
        double s = 0.0;
        for (double e : eigenvalues[l])
            if (e < lambda) s += e - lambda;
        t += degeneracy(l) * s;
    }
    return t;
}

namespace {

std::vector<std::pair<double, double>> levels(const SpectralSummary& s) {
    std::vector<std::pair<double, double>> v;
    for (std::size_t l = 0; l < s.eigenvalues.size(); ++l)
        for (double e : s.eigenvalues[l])
            if (e < 0.0) v.emplace_back(e, s.degeneracy(l));
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

double SpectralSummary::lambda_N(double N) const {
    const double target = std::ceil(N - 1e-12);
    double filled = 0.0;
    for (const auto& [e, g] : levels(*this)) {
        filled += g;
        if (filled >= target) return e;
    }
    return 0.0;
}

double SpectralSummary::lowest_sum(double N) const {
    double left = N, s = 0.0;
    for (const auto& [e, g] : levels(*this)) {
        if (left <= 0.0) break;
        const double take = std::min(g, left);
        s += take * e;
        left -= take;
    }
    return s;
}

std::string SpectralSummary::csv() const {
    std::ostringstream os;
    os.precision(12);
    os << "l,k,lambda\n";
    for (std::size_t l = 0; l < eigenvalues.size(); ++l)
        for (std::size_t k = 0; k < eigenvalues[l].size(); ++k) os << l << ',' << k << ',' << eigenvalues[l][k] << '\n';
    return os.str();
}

}  // namespace tflab
