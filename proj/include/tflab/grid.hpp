#pragma once

#include <array>
#include <string>
#include <cstddef>
#include <memory>
#include <vector>

#include "tflab/config.hpp"

namespace tflab {

/// One axis of a cell-centred grid: interior nodes sit at the centres of their cells, the two
/// end nodes lie on the box faces and carry Dirichlet data.
struct Axis {
    std::vector<double> nodes;
    std::vector<double> faces;      // faces[i-1], faces[i] bound the cell of interior node i
    std::vector<double> dual;       // cell widths; boundary nodes get 0
    std::vector<double> inv_left;   // 1 / (x_i - x_{i-1}), 0 at i = 0
    std::vector<double> inv_right;  // 1 / (x_{i+1} - x_i), 0 at the last node

    std::size_t size() const { return nodes.size(); }
    double lo() const { return nodes.front(); }
    double hi() const { return nodes.back(); }
    double face_lo(std::size_t i) const { return faces[i - 1]; }
    double face_hi(std::size_t i) const { return faces[i]; }
    /// Smallest and largest cell width.
    double min_spacing() const;
    double max_spacing() const;
};

/// Axis from strictly increasing face positions (first = lo, last = hi); n = faces + 1 nodes.
/// min_nodes below 8 is meant for internal use only.
Axis make_axis(std::vector<double> faces, std::size_t min_nodes = 8);
Axis uniform_axis(double lo, double hi, std::size_t n);
/// Cell width h(s) = min_k (h_k + gamma |s - c_k|) with gamma chosen so the axis has n nodes.
/// Falls back to uniform cells when those are finer than the requested focus spacing.
Axis graded_axis(double lo, double hi, std::size_t n, const std::vector<double>& foci,
                 const std::vector<double>& focus_spacing);

/// Tensor-product grid. Boundary nodes carry Dirichlet data; interior nodes own dual cells.
class Grid3D {
public:
    Grid3D(Axis x, Axis y, Axis z);

    const Axis& axis(int d) const { return axes_[static_cast<std::size_t>(d)]; }
    std::array<std::size_t, 3> dims() const { return {axes_[0].size(), axes_[1].size(), axes_[2].size()}; }
    std::size_t size() const { return n_; }
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return i + nx_ * (j + ny_ * k); }
    std::array<std::size_t, 3> ijk(std::size_t idx) const {
        return {idx % nx_, (idx / nx_) % ny_, idx / (nx_ * ny_)};
    }
    Vec3 point(std::size_t idx) const;
    bool interior(std::size_t i, std::size_t j, std::size_t k) const {
        return i > 0 && j > 0 && k > 0 && i + 1 < nx_ && j + 1 < ny_ && k + 1 < nz_;
    }
    /// Dual-cell volume per node (0 on the boundary).
    const std::vector<double>& volumes() const { return volume_; }
    /// Dual-cell bounds of an interior node.
    std::array<std::array<double, 2>, 3> cell(std::size_t idx) const;
    /// Interior node whose dual cell contains x (clamped to the interior).
    std::size_t locate(const Vec3& x) const;
    Vec3 box_center() const;
    bool same_layout(const Grid3D& other) const;

private:
    std::array<Axis, 3> axes_;
    std::size_t nx_, ny_, nz_, n_;
    std::vector<double> volume_;
};

struct ScalarField3D {
    std::shared_ptr<const Grid3D> grid;
    std::vector<double> values;

    ScalarField3D() = default;
    ScalarField3D(std::shared_ptr<const Grid3D> g, double fill = 0.0);
    /// Sum of dual volume times value over interior nodes.
    double integral() const;
};

/// Raw little-endian float64 array in x-fastest order plus a JSON sidecar with the axes.
void dump_field(const ScalarField3D& f, const std::string& path_prefix);

}  // namespace tflab
