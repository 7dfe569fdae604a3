#pragma once

#include <cmath>
#include <vector>

#include "tflab/grid.hpp"

namespace tflab {

/// Spherically symmetric density on a strictly increasing radial grid; zero beyond the last radius.
struct RadialDensity {
    std::vector<double> r;
    std::vector<double> f;

    RadialDensity() = default;
    RadialDensity(std::vector<double> radii, std::vector<double> values);
    /// Log-spaced grid on [r_min, r_max] sampled from f.
    template <class F>
    static RadialDensity sample(double r_min, double r_max, std::size_t n, F&& fn) {
        std::vector<double> rr(n), vv(n);
        for (std::size_t i = 0; i < n; ++i) {
            rr[i] = r_min * std::pow(r_max / r_min, double(i) / double(n - 1));
            vv[i] = fn(rr[i]);
        }
        return RadialDensity(std::move(rr), std::move(vv));
    }

    /// Quadrature weights for int 4 pi r^2 g dr (cubic in log r on even steps, power-law inner end).
    std::vector<double> weights() const;
    double total() const;
    /// Charge inside each grid radius.
    std::vector<double> enclosed() const;
};

struct RadialPotential {
    std::vector<double> r;
    std::vector<double> v;
    double total_charge = 0.0;
    double at_origin = 0.0;
    /// Interpolated in log r; exactly total/r beyond the last radius.
    double at(double radius) const;
};

double d_form(const RadialDensity& f, const RadialDensity& g);
RadialPotential hartree_potential(const RadialDensity& f);

struct PoissonOptions {
    double rtol = 1e-10;
    int max_iter = 20000;
    bool has_center = false;
    Vec3 center{0.0, 0.0, 0.0};
};

struct PoissonResult {
    ScalarField3D potential;  // boundary nodes hold s / |x - center|
    double monopole = 0.0;    // s
    int iterations = 0;
    double residual = 0.0;
};

class GridLaplacian;

/// Solves -Laplace(phi) = 4 pi g with the variational monopole boundary.
PoissonResult solve_poisson(const ScalarField3D& g, const PoissonOptions& opt = {});
double d_form(const ScalarField3D& f, const ScalarField3D& g, const PoissonOptions& opt = {});
ScalarField3D hartree_potential(const ScalarField3D& f, const PoissonOptions& opt = {});
/// Discrete L2 norm of (1/4 pi) Laplace(W - V) - rho over interior nodes.
double poisson_residual(const ScalarField3D& W, const ScalarField3D& V, const ScalarField3D& rho);
/// |grad u|^2 over the box from the discrete Dirichlet form (boundary values as stored).
double dirichlet_energy(const ScalarField3D& u);

}  // namespace tflab
