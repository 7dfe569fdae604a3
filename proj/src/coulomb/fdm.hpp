#pragma once

#include <array>
#include <vector>

#include "tflab/grid.hpp"

namespace tflab {

// Exact inverse of the separable interior operator sum_d L_d (x) M_e (x) M_f with zero
// Dirichlet data, via M-orthonormal eigenvectors of each 1D pencil (L_d, M_d).
class FastDiagonalization {
public:
    explicit FastDiagonalization(const Grid3D& grid);

    std::size_t size() const { return n_[0] * n_[1] * n_[2]; }
    /// z = K0^{-1} r on interior-packed arrays (x fastest); shift adds c * M (x) M (x) M.
    void solve(const std::vector<double>& r, std::vector<double>& z, double shift = 0.0) const;

private:
    void transform(const std::vector<double>& in, std::vector<double>& out, int axis, bool forward) const;

    std::array<std::size_t, 3> n_{};
    std::array<std::vector<double>, 3> vec_;   // V[i * n + m]
    std::array<std::vector<double>, 3> vecT_;  // V^T[m * n + i]
    std::array<std::vector<double>, 3> lambda_;
    mutable std::vector<double> tmp_;
};

}  // namespace tflab
