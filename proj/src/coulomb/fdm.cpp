#include "fdm.hpp"

#include <cmath>
#include <lapacke.h>

#include "tflab/error.hpp"
#include "tflab/kernels.hpp"
#include "tflab/parallel.hpp"

namespace tflab {

FastDiagonalization::FastDiagonalization(const Grid3D& grid) {
    for (int d = 0; d < 3; ++d) {
        const Axis& a = grid.axis(d);
        const std::size_t n = a.size() - 2;
        const auto du = static_cast<std::size_t>(d);
        n_[du] = n;
        // symmetric form M^{-1/2} L M^{-1/2}
        std::vector<double> diag(n), off(n > 1 ? n - 1 : 1), z(n * n);
        for (std::size_t i = 0; i < n; ++i) diag[i] = (a.inv_left[i + 1] + a.inv_right[i + 1]) / a.dual[i + 1];
        for (std::size_t i = 0; i + 1 < n; ++i)
            off[i] = -a.inv_right[i + 1] / std::sqrt(a.dual[i + 1] * a.dual[i + 2]);
        const lapack_int info = LAPACKE_dstev(LAPACK_ROW_MAJOR, 'V', static_cast<lapack_int>(n), diag.data(),
                                              off.data(), z.data(), static_cast<lapack_int>(n));
        if (info != 0) throw ConvergenceError("fast diagonalization: eigensolver failed");
        vec_[du].resize(n * n);
        vecT_[du].resize(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            const double s = 1.0 / std::sqrt(a.dual[i + 1]);
            for (std::size_t m = 0; m < n; ++m) {
                vec_[du][i * n + m] = s * z[i * n + m];
                vecT_[du][m * n + i] = s * z[i * n + m];
            }
        }
        lambda_[du] = diag;
    }
}

// forward: out = V^T in along the axis; backward: out = V in.
void FastDiagonalization::transform(const std::vector<double>& in, std::vector<double>& out, int axis,
                                    bool forward) const {
    const auto& kt = kernels::active();
    const auto ax = static_cast<std::size_t>(axis);
    const std::size_t nx = n_[0], ny = n_[1], nz = n_[2], n = n_[ax];
    // out_m = sum_i Q[i][m] in_i with Q = V (forward) or V^T (backward)
    const std::vector<double>& qt = forward ? vecT_[ax] : vec_[ax];  // qt[m * n + i] = Q[i][m]
    out.assign(in.size(), 0.0);
    if (ax == 0) {
        const std::size_t rows = ny * nz;
        const std::size_t per = std::max<std::size_t>(1, kChunk / nx);
        parallel_chunks((rows + per - 1) / per, [&](std::size_t c) {
            const std::size_t r1 = std::min(rows, (c + 1) * per);
            for (std::size_t r = c * per; r < r1; ++r)
                for (std::size_t m = 0; m < nx; ++m)
                    out[r * nx + m] = kt.dot(qt.data() + m * n, in.data() + r * nx, nx);
        });
    } else if (ax == 1) {
        parallel_chunks(nz * ny, [&](std::size_t c) {
            const std::size_t k = c / ny, m = c % ny;
            double* dst = out.data() + (k * ny + m) * nx;
            for (std::size_t i = 0; i < ny; ++i) kt.axpy(qt[m * n + i], in.data() + (k * ny + i) * nx, dst, nx);
        });
    } else {
        const std::size_t plane = nx * ny;
        const std::size_t pieces = chunk_count(plane);
        parallel_chunks(nz * pieces, [&](std::size_t c) {
            const std::size_t m = c / pieces, p = c % pieces;
            const std::size_t lo = p * kChunk, len = std::min(plane, lo + kChunk) - lo;
            double* dst = out.data() + m * plane + lo;
            for (std::size_t i = 0; i < nz; ++i) kt.axpy(qt[m * n + i], in.data() + i * plane + lo, dst, len);
        });
    }
}

void FastDiagonalization::solve(const std::vector<double>& r, std::vector<double>& z, double shift) const {
    const std::size_t nx = n_[0], ny = n_[1];
    transform(r, tmp_, 0, true);
    transform(tmp_, z, 1, true);
    transform(z, tmp_, 2, true);
    const std::size_t total = size();
    parallel_chunks(chunk_count(total), [&](std::size_t c) {
        const std::size_t lo = c * kChunk, hi = std::min(total, lo + kChunk);
        for (std::size_t idx = lo; idx < hi; ++idx) {
            const std::size_t i = idx % nx, j = (idx / nx) % ny, k = idx / (nx * ny);
            tmp_[idx] /= lambda_[0][i] + lambda_[1][j] + lambda_[2][k] + shift;
        }
    });
    transform(tmp_, z, 2, false);
    transform(z, tmp_, 1, false);
    transform(tmp_, z, 0, false);
}

}  // namespace tflab
