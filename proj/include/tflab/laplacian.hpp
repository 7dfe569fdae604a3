#pragma once

#include <memory>
#include <vector>

#include "tflab/grid.hpp"

namespace tflab {

class FastDiagonalization;

/// Discrete -Laplacian (times dual volumes) on a tensor grid with a variational monopole
/// boundary: boundary values are s / |x - c| with s an extra unknown, and the exterior field
/// energy kappa s^2 closes the quadratic form. The operator K is symmetric positive definite
/// and u^T K u approximates the full-space integral of |grad u|^2.
class GridLaplacian {
public:
    struct Vec {
        std::vector<double> v;  // full grid; boundary entries are kept at zero
        double s = 0.0;
    };
    struct CGResult {
        int iterations = 0;
        double residual = 0.0;
        bool converged = false;
    };

    GridLaplacian(std::shared_ptr<const Grid3D> grid, const Vec3& center);
    GridLaplacian(const GridLaplacian&) = delete;
    GridLaplacian& operator=(const GridLaplacian&) = delete;

    const Grid3D& grid() const { return *grid_; }
    std::shared_ptr<const Grid3D> grid_ptr() const { return grid_; }
    const Vec3& center() const { return center_; }
    double kappa() const { return kappa_; }
    /// 1 / |x_b - c| at boundary nodes, 0 elsewhere.
    const std::vector<double>& boundary_profile() const { return gb_; }

    Vec make_vec() const;
    /// y = (K + diag(extra)) x. The extra diagonal acts on interior nodes only.
    void apply(const Vec& x, Vec& y, const double* extra = nullptr) const;
    double dot(const Vec& a, const Vec& b) const;
    void axpy(double alpha, const Vec& x, Vec& y) const;
    void xpby(const Vec& x, double beta, Vec& y) const;
    /// Interior rows of the stencil applied to a full field, boundary values taken as stored.
    void apply_dirichlet(const std::vector<double>& full, std::vector<double>& y) const;
    /// x^T K x.
    double energy(const Vec& x) const;
    /// Full field with boundary entries s * g_b.
    std::vector<double> expand(const Vec& x) const;

    /// Applies K^{-1} exactly (the extra diagonal is ignored).
    void precondition(const Vec& in, Vec& out) const;
    /// PCG for (K + diag(extra)) x = b, warm-started from x, preconditioned by K^{-1}.
    CGResult solve(Vec& x, const Vec& b, const double* extra, double rtol, int max_iter) const;

    const std::vector<std::size_t>& boundary_nodes() const { return boundary_nodes_; }

private:
    void apply_rows(const double* x, double* y, const double* extra) const;
    void pack(const std::vector<double>& full, std::vector<double>& out) const;
    void unpack(const std::vector<double>& packed, std::vector<double>& full) const;

    std::shared_ptr<const Grid3D> grid_;
    Vec3 center_;
    std::vector<double> gb_;
    std::vector<std::size_t> boundary_nodes_;
    // Interior nodes next to the boundary: node, coupling c_l * g_b.
    std::vector<std::pair<std::size_t, double>> links_;
    double kappa_ = 0.0, diag_s_ = 0.0;
    mutable std::shared_ptr<FastDiagonalization> fdm_;
    mutable std::vector<double> fdm_w_;
    mutable double fdm_sigma_ = 0.0;
    mutable std::vector<double> pack_r_, pack_z_;
};

/// Exterior energy coefficient: integral over the box surface of (x-c).n / |x-c|^4.
double exterior_monopole_coefficient(const Grid3D& grid, const Vec3& center);

}  // namespace tflab
