#include "tflab/laplacian.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "tflab/error.hpp"
#include "tflab/kernels.hpp"
#include "tflab/parallel.hpp"
#include "fdm.hpp"

namespace tflab {

double exterior_monopole_coefficient(const Grid3D& grid, const Vec3& c) {
    using boost::math::quadrature::gauss;
    constexpr int kPanels = 8;
    double total = 0.0;
    for (int d = 0; d < 3; ++d) {
        const int e1 = (d + 1) % 3, e2 = (d + 2) % 3;
        const Axis& a1 = grid.axis(e1);
        const Axis& a2 = grid.axis(e2);
        for (int side = 0; side < 2; ++side) {
            const double plane = side ? grid.axis(d).hi() : grid.axis(d).lo();
            const double normal = side ? 1.0 : -1.0;
            const double h = (plane - c[static_cast<std::size_t>(d)]) * normal;
            auto integrand = [&](double u, double v) {
                const double du = u - c[static_cast<std::size_t>(e1)], dv = v - c[static_cast<std::size_t>(e2)];
                const double r2 = h * h + du * du + dv * dv;
                return h / (r2 * r2);
            };
            for (int p = 0; p < kPanels; ++p) {
                const double u0 = a1.lo() + (a1.hi() - a1.lo()) * p / kPanels;
                const double u1 = a1.lo() + (a1.hi() - a1.lo()) * (p + 1) / kPanels;
                for (int q = 0; q < kPanels; ++q) {
                    const double v0 = a2.lo() + (a2.hi() - a2.lo()) * q / kPanels;
                    const double v1 = a2.lo() + (a2.hi() - a2.lo()) * (q + 1) / kPanels;
                    total += gauss<double, 15>::integrate(
                        [&](double u) {
                            return gauss<double, 15>::integrate([&](double v) { return integrand(u, v); }, v0, v1);
                        },
                        u0, u1);
                }
            }
        }
    }
    return total;
}

GridLaplacian::GridLaplacian(std::shared_ptr<const Grid3D> grid, const Vec3& center)
    : grid_(std::move(grid)), center_(center) {
    const Grid3D& g = *grid_;
    const auto [nx, ny, nz] = g.dims();
    for (int d = 0; d < 3; ++d)
        if (!(center[static_cast<std::size_t>(d)] > g.axis(d).lo() && center[static_cast<std::size_t>(d)] < g.axis(d).hi()))
            throw DomainError("monopole center must lie inside the box");
    gb_.assign(g.size(), 0.0);
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const auto [i, j, k] = g.ijk(idx);
        if (g.interior(i, j, k)) continue;
        boundary_nodes_.push_back(idx);
        gb_[idx] = 1.0 / distance(g.point(idx), center);
    }
    const Axis& ax = g.axis(0);
    const Axis& ay = g.axis(1);
    const Axis& az = g.axis(2);
    auto add = [&](std::size_t a, std::size_t b, double c) {
        links_.emplace_back(a, c * gb_[b]);
        diag_s_ += c * gb_[b] * gb_[b];
    };
    for (std::size_t k = 1; k + 1 < nz; ++k)
        for (std::size_t j = 1; j + 1 < ny; ++j)
            for (std::size_t i = 1; i + 1 < nx; ++i) {
                const std::size_t a = g.index(i, j, k);
                const double syz = ay.dual[j] * az.dual[k];
                const double sxz = ax.dual[i] * az.dual[k];
                const double sxy = ax.dual[i] * ay.dual[j];
                if (i == 1) add(a, g.index(0, j, k), syz * ax.inv_left[i]);
                if (i + 2 == nx) add(a, g.index(nx - 1, j, k), syz * ax.inv_right[i]);
                if (j == 1) add(a, g.index(i, 0, k), sxz * ay.inv_left[j]);
                if (j + 2 == ny) add(a, g.index(i, ny - 1, k), sxz * ay.inv_right[j]);
                if (k == 1) add(a, g.index(i, j, 0), sxy * az.inv_left[k]);
                if (k + 2 == nz) add(a, g.index(i, j, nz - 1), sxy * az.inv_right[k]);
            }
    kappa_ = exterior_monopole_coefficient(g, center);
    diag_s_ += kappa_;
}

GridLaplacian::Vec GridLaplacian::make_vec() const {
    Vec v;
    v.v.assign(grid_->size(), 0.0);
    return v;
}

void GridLaplacian::apply_rows(const double* x, double* y, const double* extra) const {
    const Grid3D& g = *grid_;
    const auto [nx, ny, nz] = g.dims();
    const Axis& ax = g.axis(0);
    const Axis& ay = g.axis(1);
    const Axis& az = g.axis(2);
    const std::size_t rows = (ny - 2) * (nz - 2);
    const std::size_t per = std::max<std::size_t>(1, kChunk / nx);
    const auto& kt = kernels::active();
    parallel_chunks((rows + per - 1) / per, [&](std::size_t c) {
        const std::size_t r1 = std::min(rows, (c + 1) * per);
        for (std::size_t r = c * per; r < r1; ++r) {
            const std::size_t j = 1 + r % (ny - 2), k = 1 + r / (ny - 2);
            const std::size_t off = g.index(0, j, k);
            kernels::StencilRow row;
            row.n = nx;
            row.x = x + off;
            row.s = x + off - nx;
            row.north = x + off + nx;
            row.b = x + off - nx * ny;
            row.t = x + off + nx * ny;
            row.axm = ax.inv_left.data();
            row.axp = ax.inv_right.data();
            row.wx = ax.dual.data();
            row.diag = extra ? extra + off : nullptr;
            row.syz = ay.dual[j] * az.dual[k];
            row.cym = az.dual[k] * ay.inv_left[j];
            row.cyp = az.dual[k] * ay.inv_right[j];
            row.czm = ay.dual[j] * az.inv_left[k];
            row.czp = ay.dual[j] * az.inv_right[k];
            row.y = y + off;
            kt.stencil_row(row);
        }
    });
}

void GridLaplacian::apply(const Vec& x, Vec& y, const double* extra) const {
    if (y.v.size() != grid_->size()) y = make_vec();
    apply_rows(x.v.data(), y.v.data(), extra);
    double acc = diag_s_ * x.s;
    for (const auto& [a, c] : links_) {
        y.v[a] -= c * x.s;
        acc -= c * x.v[a];
    }
    y.s = acc;
}

void GridLaplacian::apply_dirichlet(const std::vector<double>& full, std::vector<double>& y) const {
    y.assign(grid_->size(), 0.0);
    apply_rows(full.data(), y.data(), nullptr);
}

double GridLaplacian::dot(const Vec& a, const Vec& b) const {
    const auto& kt = kernels::active();
    const double* pa = a.v.data();
    const double* pb = b.v.data();
    return parallel_sum(a.v.size(), [&](std::size_t lo, std::size_t hi) { return kt.dot(pa + lo, pb + lo, hi - lo); }) +
           a.s * b.s;
}

void GridLaplacian::axpy(double alpha, const Vec& x, Vec& y) const {
    const auto& kt = kernels::active();
    const std::size_t n = x.v.size();
    parallel_chunks(chunk_count(n), [&](std::size_t c) {
        const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
        kt.axpy(alpha, x.v.data() + lo, y.v.data() + lo, hi - lo);
    });
    y.s += alpha * x.s;
}

void GridLaplacian::xpby(const Vec& x, double beta, Vec& y) const {
    const auto& kt = kernels::active();
    const std::size_t n = x.v.size();
    parallel_chunks(chunk_count(n), [&](std::size_t c) {
        const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
        kt.xpby(x.v.data() + lo, beta, y.v.data() + lo, hi - lo);
    });
    y.s = x.s + beta * y.s;
}

double GridLaplacian::energy(const Vec& x) const {
    Vec y = make_vec();
    apply(x, y);
    return dot(x, y);
}

std::vector<double> GridLaplacian::expand(const Vec& x) const {
    std::vector<double> out = x.v;
    for (std::size_t b : boundary_nodes_) out[b] = x.s * gb_[b];
    return out;
}

void GridLaplacian::pack(const std::vector<double>& full, std::vector<double>& out) const {
    const auto [nx, ny, nz] = grid_->dims();
    out.resize((nx - 2) * (ny - 2) * (nz - 2));
    std::size_t p = 0;
    for (std::size_t k = 1; k + 1 < nz; ++k)
        for (std::size_t j = 1; j + 1 < ny; ++j)
            for (std::size_t i = 1; i + 1 < nx; ++i) out[p++] = full[grid_->index(i, j, k)];
}

void GridLaplacian::unpack(const std::vector<double>& packed, std::vector<double>& full) const {
    const auto [nx, ny, nz] = grid_->dims();
    std::size_t p = 0;
    for (std::size_t k = 1; k + 1 < nz; ++k)
        for (std::size_t j = 1; j + 1 < ny; ++j)
            for (std::size_t i = 1; i + 1 < nx; ++i) full[grid_->index(i, j, k)] = packed[p++];
}

// Exact inverse of K: fast diagonalization for the interior block, Schur complement for s.
void GridLaplacian::precondition(const Vec& in, Vec& out) const {
    if (!fdm_) {
        fdm_ = std::make_shared<FastDiagonalization>(*grid_);
        std::vector<double> u(grid_->size(), 0.0);
        for (const auto& [a, c] : links_) u[a] += c;
        pack(u, pack_r_);
        fdm_->solve(pack_r_, pack_z_);
        fdm_w_.assign(grid_->size(), 0.0);
        unpack(pack_z_, fdm_w_);
        double uw = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) uw += u[i] * fdm_w_[i];
        fdm_sigma_ = diag_s_ - uw;
    }
    if (out.v.size() != grid_->size()) out = make_vec();
    pack(in.v, pack_r_);
    fdm_->solve(pack_r_, pack_z_);
    unpack(pack_z_, out.v);
    double uz = 0.0;
    for (const auto& [a, c] : links_) uz += c * out.v[a];
    out.s = (in.s + uz) / fdm_sigma_;
    kernels::active().axpy(out.s, fdm_w_.data(), out.v.data(), out.v.size());
}

GridLaplacian::CGResult GridLaplacian::solve(Vec& x, const Vec& b, const double* extra, double rtol,
                                             int max_iter) const {
    if (x.v.size() != grid_->size()) x = make_vec();
    for (std::size_t i : boundary_nodes_) x.v[i] = 0.0;
    Vec r = make_vec(), z = make_vec(), p = make_vec(), q = make_vec();
    apply(x, q, extra);
    r.v = b.v;
    r.s = b.s;
    for (std::size_t i : boundary_nodes_) r.v[i] = 0.0;
    axpy(-1.0, q, r);
    const double bnorm = std::sqrt(std::max(dot(b, b), 1e-300));
    CGResult res;
    double rnorm = std::sqrt(dot(r, r));
    if (rnorm <= rtol * bnorm) {
        res.residual = rnorm / bnorm;
        res.converged = true;
        return res;
    }
    precondition(r, z);
    p.v = z.v;
    p.s = z.s;
    double rz = dot(r, z);
    for (int it = 1; it <= max_iter; ++it) {
        apply(p, q, extra);
        const double pq = dot(p, q);
        if (!(pq > 0.0)) throw ConvergenceError("CG: operator is not positive definite");
        const double alpha = rz / pq;
        axpy(alpha, p, x);
        axpy(-alpha, q, r);
        rnorm = std::sqrt(dot(r, r));
        res.iterations = it;
        res.residual = rnorm / bnorm;
        if (rnorm <= rtol * bnorm) {
            res.converged = true;
            return res;
        }
        precondition(r, z);
        const double rz_new = dot(r, z);
        xpby(z, rz_new / rz, p);
        rz = rz_new;
    }
    return res;
}

}  // namespace tflab
