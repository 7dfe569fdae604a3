#include <cmath>
#include <numbers>

#include "tflab/coulomb.hpp"
#include "tflab/error.hpp"
#include "tflab/laplacian.hpp"
#include "tflab/parallel.hpp"

namespace tflab {
namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

void check(const ScalarField3D& f) {
    if (!f.grid || f.values.size() != f.grid->size()) throw DomainError("field does not match its grid");
}

}  // namespace

PoissonResult solve_poisson(const ScalarField3D& g, const PoissonOptions& opt) {
    check(g);
    const Vec3 c = opt.has_center ? opt.center : g.grid->box_center();
    GridLaplacian lap(g.grid, c);
    auto b = lap.make_vec();
    const auto& vol = g.grid->volumes();
    for (std::size_t i = 0; i < vol.size(); ++i) b.v[i] = kFourPi * vol[i] * g.values[i];
    auto x = lap.make_vec();
    const auto cg = lap.solve(x, b, nullptr, opt.rtol, opt.max_iter);
    if (!cg.converged) throw ConvergenceError("Poisson CG did not converge");
    PoissonResult res;
    res.potential = ScalarField3D(g.grid);
    res.potential.values = lap.expand(x);
    res.monopole = x.s;
    res.iterations = cg.iterations;
    res.residual = cg.residual;
    return res;
}

ScalarField3D hartree_potential(const ScalarField3D& f, const PoissonOptions& opt) {
    return solve_poisson(f, opt).potential;
}

double d_form(const ScalarField3D& f, const ScalarField3D& g, const PoissonOptions& opt) {
    check(f);
    if (!f.grid->same_layout(*g.grid)) throw DomainError("D: fields live on different grids");
    const auto phi = solve_poisson(g, opt).potential;
    const auto& vol = f.grid->volumes();
    return parallel_sum(vol.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += vol[i] * f.values[i] * phi.values[i];
        return s;
    });
}

double poisson_residual(const ScalarField3D& W, const ScalarField3D& V, const ScalarField3D& rho) {
    check(W);
    check(V);
    check(rho);
    const Grid3D& g = *W.grid;
    // phi = V - W is the Hartree potential; K phi / (4 pi vol) approximates -Laplace(phi) / (4 pi)
    std::vector<double> phi(g.size());
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = V.values[i] - W.values[i];
    GridLaplacian lap(W.grid, g.box_center());
    std::vector<double> y;
    lap.apply_dirichlet(phi, y);
    const auto& vol = g.volumes();
    double s = 0.0;
    for (std::size_t i = 0; i < vol.size(); ++i) {
        if (vol[i] <= 0.0) continue;
        const double r = y[i] / (kFourPi * vol[i]) - rho.values[i];
        s += vol[i] * r * r;
    }
    return std::sqrt(s);
}

double dirichlet_energy(const ScalarField3D& u) {
    check(u);
    const Grid3D& g = *u.grid;
    const auto [nx, ny, nz] = g.dims();
    const Axis& ax = g.axis(0);
    const Axis& ay = g.axis(1);
    const Axis& az = g.axis(2);
    const auto& v = u.values;
    double e = 0.0;
    // every link with an interior endpoint, counted once
    for (std::size_t k = 1; k + 1 < nz; ++k)
        for (std::size_t j = 1; j + 1 < ny; ++j)
            for (std::size_t i = 1; i + 1 < nx; ++i) {
                const std::size_t a = g.index(i, j, k);
                const double syz = ay.dual[j] * az.dual[k];
                const double sxz = ax.dual[i] * az.dual[k];
                const double sxy = ax.dual[i] * ay.dual[j];
                auto link = [&](std::size_t b, double c) { e += c * (v[a] - v[b]) * (v[a] - v[b]); };
                link(a + 1, syz * ax.inv_right[i]);
                link(a + nx, sxz * ay.inv_right[j]);
                link(a + nx * ny, sxy * az.inv_right[k]);
                if (i == 1) link(a - 1, syz * ax.inv_left[i]);
                if (j == 1) link(a - nx, sxz * ay.inv_left[j]);
                if (k == 1) link(a - nx * ny, sxy * az.inv_left[k]);
            }
    return e;
}

}  // namespace tflab
