#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include <boost/numeric/odeint.hpp>

#include "tflab/atom.hpp"
#include "tflab/error.hpp"

namespace tflab {
namespace {

namespace ode = boost::numeric::odeint;

// chi, chi', then the running integrals in TFProfile order.
using State = std::array<double, 8>;
enum { kChi, kDchi, kRho, kV, kW, kField, kChiInt, k43 };

constexpr double kStart = 1e-8;
constexpr double kFar = 1e4;
constexpr double kMatch = 5.0;
constexpr double kLogStep = 0.005;

void integrands(const State& s, double x, State& d) {
    const double c = std::max(s[kChi], 0.0);
    const double c32 = c * std::sqrt(c);
    const double sx = std::sqrt(x);
    const double f = s[kDchi] + (1.0 - s[kChi]) / x;
    d[kChi] = s[kDchi];
    d[kDchi] = c32 / sx;
    d[kRho] = sx * c32;
    d[kV] = c32 / sx;
    d[kW] = c32 * c / sx;
    d[kField] = f * f;
    d[kChiInt] = c;
    d[k43] = c * c;
}

struct OutwardSystem {
    void operator()(const State& s, State& d, double x) const { integrands(s, x, d); }
};

// Same system in u = ln x.
struct LogSystem {
    void operator()(const State& s, State& d, double u) const {
        const double x = std::exp(u);
        integrands(s, x, d);
        for (double& v : d) v *= x;
    }
};

State series_start(double slope) {
    const double x = kStart;
    const double sx = std::sqrt(x);
    State s{};
    s[kChi] = 1.0 + slope * x + (4.0 / 3.0) * x * sx + 0.4 * slope * x * x * sx;
    s[kDchi] = slope + 2.0 * sx + slope * x * sx;
    s[kRho] = (2.0 / 3.0) * x * sx;
    s[kV] = 2.0 * sx;
    s[kW] = 2.0 * sx;
    s[kField] = (2.0 / 9.0) * x * x;
    s[kChiInt] = x;
    s[k43] = x;
    return s;
}

enum class Outcome { CrossedZero, TurnedUp, Reached };

struct ShotResult {
    Outcome outcome;
    double x_end;
    State state;
};

using Dense = decltype(ode::make_dense_output(1e-10, 1e-10, ode::runge_kutta_dopri5<State>()));

// Integrates outward from the series start. Stops at the first zero of chi (located to
// round-off), when chi' turns positive, or at x_stop. Used for decisions only; samples and
// integrals come from march_outward, which lands exactly on each requested abscissa.
ShotResult shoot(double slope, double x_stop, const ShootingTolerances& tol) {
    Dense stepper = ode::make_dense_output(tol.atol, tol.rtol, ode::runge_kutta_dopri5<State>());
    stepper.initialize(series_start(slope), kStart, 1e-10);
    for (int guard = 0; guard < 2000000; ++guard) {
        stepper.do_step(OutwardSystem{});
        const double t1 = stepper.current_time();
        const State& s1 = stepper.current_state();
        if (s1[kChi] <= 0.0) {
            double lo = stepper.previous_time(), hi = t1;
            State s;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                stepper.calc_state(mid, s);
                (s[kChi] > 0.0 ? lo : hi) = mid;
            }
            stepper.calc_state(hi, s);
            return {Outcome::CrossedZero, hi, s};
        }
        if (s1[kDchi] > 0.0) return {Outcome::TurnedUp, t1, s1};
        if (t1 >= x_stop) {
            State s;
            stepper.calc_state(x_stop, s);
            return {Outcome::Reached, x_stop, s};
        }
    }
    throw ConvergenceError("TF shooting: step budget exhausted");
}

// Outward states at increasing abscissae (all > kStart).
std::vector<State> march_outward(double slope, const std::vector<double>& xs, const ShootingTolerances& tol) {
    std::vector<double> times;
    times.push_back(kStart);
    times.insert(times.end(), xs.begin(), xs.end());
    std::vector<State> out;
    State s = series_start(slope);
    ode::integrate_times(ode::make_controlled(tol.atol, tol.rtol, ode::runge_kutta_dopri5<State>()), OutwardSystem{}, s,
                         times.begin(), times.end(), 1e-10, [&](const State& st, double) { out.push_back(st); });
    out.erase(out.begin());
    return out;
}

// Far-field family chi = 144 x^-3 G(y), y = c x^-lambda, G = sum a_k y^k with a_0 = 1,
// a_1 = -1. Higher a_k follow from lambda^2 D^2 G + 7 lambda D G + 12 (G - G^{3/2}) = 0, D = y d/dy.
struct FarField {
    static constexpr int K = 14;
    using Series = std::array<double, K + 1>;
    Series a{}, p15{}, p25{}, p2{}, s{}, s2{};

    static Series power(const Series& g, double alpha) {
        Series h{};
        h[0] = 1.0;
        for (int k = 1; k <= K; ++k) {
            double acc = 0.0;
            for (int j = 1; j <= k; ++j) acc += ((alpha + 1.0) * j - k) * g[j] * h[k - j];
            h[k] = acc / k;
        }
        return h;
    }
    static Series product(const Series& f, const Series& g) {
        Series h{};
        for (int i = 0; i <= K; ++i)
            for (int j = 0; i + j <= K; ++j) h[i + j] += f[i] * g[j];
        return h;
    }

    FarField() {
        const double lam = sommerfeld_exponent();
        a[0] = 1.0;
        a[1] = -1.0;
        for (int k = 2; k <= K; ++k) {
            const Series h = power(a, 1.5);  // a_k is still zero here, so h_k is purely nonlinear
            a[k] = 12.0 * h[k] / (lam * lam * k * k + 7.0 * lam * k - 6.0);
        }
        p15 = power(a, 1.5);
        p25 = power(a, 2.5);
        p2 = product(a, a);
        for (int k = 0; k <= K; ++k) s[k] = (4.0 + k * lam) * a[k];
        s2 = product(s, s);
    }

    static double sum(const Series& f, double y, double n, double lam) {
        double acc = 0.0, yk = 1.0;
        for (int k = 0; k <= K; ++k, yk *= y) acc += f[k] * yk / (n + k * lam);
        return acc;
    }
    double chi(double x, double c) const {
        const double y = c * std::pow(x, -sommerfeld_exponent());
        double acc = 0.0, yk = 1.0;
        for (int k = 0; k <= K; ++k, yk *= y) acc += a[k] * yk;
        return 144.0 / (x * x * x) * acc;
    }
    double dchi(double x, double c) const {
        const double lam = sommerfeld_exponent();
        const double y = c * std::pow(x, -lam);
        double acc = 0.0, yk = 1.0;
        for (int k = 0; k <= K; ++k, yk *= y) acc += (3.0 + k * lam) * a[k] * yk;
        return -144.0 / (x * x * x * x) * acc;
    }
};

const FarField& far_field() {
    static const FarField f;
    return f;
}

// Inward states from the far field chi = 144/x^3 (1 - c x^-lambda) at decreasing abscissae
// (all < kFar). Integrals accumulate as minus the contribution of [x, kFar].
std::vector<State> march_inward(double c, const std::vector<double>& xs_desc, const ShootingTolerances& tol) {
    const double X = kFar;
    State s{};
    s[kChi] = far_field().chi(X, c);
    s[kDchi] = far_field().dchi(X, c);
    std::vector<double> times{std::log(X)};
    for (double x : xs_desc) times.push_back(std::log(x));
    std::vector<State> out;
    ode::integrate_times(ode::make_controlled(0.0, tol.rtol, ode::runge_kutta_dopri5<State>()), LogSystem{}, s,
                         times.begin(), times.end(), -1e-3, [&](const State& st, double) { out.push_back(st); });
    return out;  // out[0] is the far-field start
}

// Integrals over [kFar, infinity) from the far-field series.
State far_tail(double c) {
    const FarField& f = far_field();
    const double X = kFar;
    const double lam = sommerfeld_exponent();
    const double y = c * std::pow(X, -lam);
    State t{};
    t[kRho] = 1728.0 * f.sum(f.p15, y, 3.0, lam) / std::pow(X, 3);
    t[kV] = 1728.0 * f.sum(f.p15, y, 4.0, lam) / std::pow(X, 4);
    t[kW] = std::pow(144.0, 2.5) * f.sum(f.p25, y, 7.0, lam) / std::pow(X, 7);
    t[kField] = 1.0 / X - 288.0 * f.sum(f.s, y, 4.0, lam) / std::pow(X, 4) +
                144.0 * 144.0 * f.sum(f.s2, y, 7.0, lam) / std::pow(X, 7);
    t[kChiInt] = 144.0 * f.sum(f.a, y, 2.0, lam) / (X * X);
    t[k43] = 144.0 * 144.0 * f.sum(f.p2, y, 5.0, lam) / std::pow(X, 5);
    return t;
}

std::vector<double> log_grid(double x_last) {
    std::vector<double> g;
    const double u0 = std::log(kStart), u1 = std::log(x_last);
    const auto n = static_cast<std::size_t>(std::ceil((u1 - u0) / kLogStep));
    for (std::size_t i = 0; i < n; ++i) g.push_back(std::exp(u0 + (u1 - u0) * double(i) / double(n)));
    return g;
}

void store(TFProfile& p, const std::vector<double>& xs, const std::vector<State>& ss) {
    p.x = xs;
    p.chi.resize(xs.size());
    p.dchi.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        p.chi[i] = ss[i][kChi];
        p.dchi[i] = ss[i][kDchi];
    }
}

void set_integrals(TFProfile& p, const State& s) {
    p.I_rho = s[kRho];
    p.I_v = s[kV];
    p.I_w = s[kW];
    p.I_field = s[kField];
    p.I_chi = s[kChiInt];
    p.I_43 = s[k43];
}

double neutral_slope_bisection(const ShootingTolerances& tol) {
    double lo = -1.7, hi = -1.5;  // lo crosses zero, hi turns up
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const ShotResult r = shoot(mid, 1e4, tol);
        if (r.outcome == Outcome::CrossedZero)
            lo = mid;
        else if (r.outcome == Outcome::TurnedUp)
            hi = mid;
        else
            return mid;
    }
    return 0.5 * (lo + hi);
}

std::shared_ptr<TFProfile> build_neutral(const ShootingTolerances& tol) {
    // Bisection fixes the slope to round-off; a 2x2 Newton on (slope, tail coefficient) then
    // matches the outward solution to the inward far-field family at kMatch.
    double s = neutral_slope_bisection(tol);
    double c = 13.0;
    const std::vector<double> at_match{kMatch};
    auto residual = [&](double ss, double cc) {
        const State o = march_outward(ss, at_match, tol).back();
        const State i = march_inward(cc, at_match, tol).back();
        return std::array<double, 2>{o[kChi] - i[kChi], o[kDchi] - i[kDchi]};
    };
    double best = std::numeric_limits<double>::infinity();
    double best_s = s, best_c = c;
    for (int it = 0; it < 30; ++it) {
        const auto f = residual(s, c);
        const double norm = std::abs(f[0]) + std::abs(f[1]);
        if (norm < best) {
            best = norm;
            best_s = s;
            best_c = c;
        }
        if (norm < 1e-13) break;
        const double ds = 1e-9, dc = 1e-3;
        const auto fs = residual(s + ds, c);
        const auto fc = residual(s, c + dc);
        const double j00 = (fs[0] - f[0]) / ds, j10 = (fs[1] - f[1]) / ds;
        const double j01 = (fc[0] - f[0]) / dc, j11 = (fc[1] - f[1]) / dc;
        const double det = j00 * j11 - j01 * j10;
        const double step_s = (f[0] * j11 - f[1] * j01) / det;
        const double step_c = (j00 * f[1] - j10 * f[0]) / det;
        s -= step_s;
        c -= step_c;
        if (std::abs(step_s) <= 4e-16 && std::abs(step_c) < 1e-11) break;
    }
    if (best > 1e-10) throw ConvergenceError("TF neutral match did not converge");
    s = best_s;
    c = best_c;

    auto p = std::make_shared<TFProfile>();
    p->slope = s;
    p->tail_coefficient = c;
    p->x_match = kMatch;
    const std::vector<double> grid = log_grid(kFar);
    std::vector<double> inner, outer;
    for (double g : grid)
        if (g > kStart) (g < kMatch ? inner : outer).push_back(g);
    inner.push_back(kMatch);
    std::reverse(outer.begin(), outer.end());
    outer.push_back(kMatch);
    std::vector<State> si = march_outward(s, inner, tol);
    std::vector<State> so = march_inward(c, outer, tol);
    const State o_m = si.back();
    const State i_m = so.back();
    si.pop_back();
    so.pop_back();
    std::reverse(so.begin(), so.end());  // increasing x, ends with the kFar state

    std::vector<double> xs{kStart};
    std::vector<State> ss{series_start(s)};
    xs.insert(xs.end(), inner.begin(), inner.end() - 1);
    ss.insert(ss.end(), si.begin(), si.end());
    xs.push_back(kMatch);
    State mid = o_m;
    mid[kChi] = 0.5 * (o_m[kChi] + i_m[kChi]);
    mid[kDchi] = 0.5 * (o_m[kDchi] + i_m[kDchi]);
    ss.push_back(mid);
    for (auto it = outer.rbegin() + 1; it != outer.rend(); ++it) xs.push_back(*it);
    xs.push_back(kFar);
    ss.insert(ss.end(), so.begin(), so.end());
    store(*p, xs, ss);

    State total = o_m;
    const State tail = far_tail(c);
    for (int k = kRho; k <= k43; ++k) total[k] = o_m[k] - i_m[k] + tail[k];
    set_integrals(*p, total);
    return p;
}

struct Cut {
    double x0;
    State state;
};

// Zero of chi for a slope below the neutral one, refined by Newton on exact marches.
Cut locate_cut(double slope, const ShootingTolerances& tol) {
    const ShotResult r = shoot(slope, 1e7, tol);
    if (r.outcome != Outcome::CrossedZero) return {std::numeric_limits<double>::infinity(), r.state};
    double x0 = r.x_end;
    State st = r.state;
    for (int it = 0; it < 3; ++it) {
        st = march_outward(slope, {x0}, tol).back();
        if (st[kChi] == 0.0) break;
        x0 -= st[kChi] / st[kDchi];
    }
    return {x0, st};
}

}  // namespace

double sommerfeld_exponent() { return 0.5 * (std::sqrt(73.0) - 7.0); }

double tf_length_scale(double Z, double q) {
    return std::cbrt(std::pow(3.0 * std::numbers::pi / (2.0 * q), 2.0) / Z);
}

std::shared_ptr<const TFProfile> neutral_profile() {
    static const std::shared_ptr<const TFProfile> cached = build_neutral(ShootingTolerances{});
    return cached;
}

std::shared_ptr<const TFProfile> ion_profile(double g, const ShootingTolerances& tol) {
    if (!(g > 0.0) || g > 1.0) throw DomainError("ion profile: ratio (Z-N)/Z must lie in (0, 1]");
    if (g >= 1.0) throw DomainError("ion profile: no electrons");
    static std::mutex mu;
    static std::map<double, std::shared_ptr<const TFProfile>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(g); it != cache.end()) return it->second;
    }
    const double s_neutral = neutral_profile()->slope;
    // g(s) = -x0 chi'(x0) falls from 1 (s -> -inf) to 0 (s -> neutral slope).
    auto g_of = [&](double s) {
        const Cut cut = locate_cut(s, tol);
        if (!std::isfinite(cut.x0)) return 0.0;
        return -cut.x0 * cut.state[kDchi];
    };
    double hi = s_neutral, lo = s_neutral - 1.0;
    for (int k = 0; g_of(lo) < g; ++k) {
        if (k > 200) throw ConvergenceError("ion shooting: failed to bracket slope");
        hi = lo;
        lo = s_neutral - 2.0 * (s_neutral - lo);
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (g_of(mid) > g ? lo : hi) = mid;
    }
    const double s = std::abs(g_of(lo) - g) < std::abs(g_of(hi) - g) ? lo : hi;
    const Cut cut = locate_cut(s, tol);
    if (!std::isfinite(cut.x0)) throw ConvergenceError("ion shooting: no zero of chi");

    auto p = std::make_shared<TFProfile>();
    p->ion_ratio = g;
    p->slope = s;
    p->x_cut = cut.x0;
    std::vector<double> grid = log_grid(cut.x0);
    std::vector<double> xs(grid.begin() + 1, grid.end());
    xs.push_back(cut.x0);
    std::vector<State> ss = march_outward(s, xs, tol);
    ss.insert(ss.begin(), series_start(s));
    xs.insert(xs.begin(), kStart);
    ss.back()[kChi] = 0.0;
    store(*p, xs, ss);
    set_integrals(*p, ss.back());
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(g, p);
    return p;
}

double TFProfile::chi_at(double xx) const {
    if (xx <= 0.0) return 1.0;
    if (xx < x.front()) return 1.0 + slope * xx + (4.0 / 3.0) * xx * std::sqrt(xx);
    if (xx >= x.back()) {
        if (std::isfinite(x_cut)) return 0.0;
        return far_field().chi(xx, tail_coefficient);
    }
    const auto it = std::upper_bound(x.begin(), x.end(), xx);
    const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
    const double h = x[i + 1] - x[i];
    const double t = (xx - x[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * chi[i] + (t3 - 2 * t2 + t) * h * dchi[i] + (-2 * t3 + 3 * t2) * chi[i + 1] +
           (t3 - t2) * h * dchi[i + 1];
}

double TFProfile::dchi_at(double xx) const {
    if (xx <= 0.0) return slope;
    if (xx < x.front()) return slope + 2.0 * std::sqrt(xx);
    if (xx >= x.back()) {
        if (std::isfinite(x_cut)) return 0.0;
        return far_field().dchi(xx, tail_coefficient);
    }
    // Derivative of the Hermite interpolant of chi' using chi'' from the equation.
    const auto it = std::upper_bound(x.begin(), x.end(), xx);
    const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
    const double h = x[i + 1] - x[i];
    const double t = (xx - x[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    auto dd = [&](std::size_t k) { return std::pow(std::max(chi[k], 0.0), 1.5) / std::sqrt(x[k]); };
    return (2 * t3 - 3 * t2 + 1) * dchi[i] + (t3 - 2 * t2 + t) * h * dd(i) + (-2 * t3 + 3 * t2) * dchi[i + 1] +
           (t3 - t2) * h * dd(i + 1);
}

double TFProfile::d2chi_at(double xx) const {
    if (xx <= 0.0) return std::numeric_limits<double>::infinity();
    if (std::isfinite(x_cut) && xx >= x_cut) return 0.0;
    const double c = std::max(chi_at(xx), 0.0);
    return c * std::sqrt(c) / std::sqrt(xx);
}

}  // namespace tflab
