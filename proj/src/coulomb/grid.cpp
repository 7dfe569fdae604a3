#include "tflab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "tflab/error.hpp"
#include "tflab/json_util.hpp"

namespace tflab {

double Axis::min_spacing() const {
    double h = hi() - lo();
    for (std::size_t i = 1; i < faces.size(); ++i) h = std::min(h, faces[i] - faces[i - 1]);
    return h;
}

double Axis::max_spacing() const {
    double h = 0.0;
    for (std::size_t i = 1; i < faces.size(); ++i) h = std::max(h, faces[i] - faces[i - 1]);
    return h;
}

Axis make_axis(std::vector<double> faces, std::size_t min_nodes) {
    if (faces.size() + 1 < std::max<std::size_t>(min_nodes, 3)) throw DomainError("grid axis has too few nodes");
    for (std::size_t i = 1; i < faces.size(); ++i)
        if (!(faces[i] > faces[i - 1])) throw DomainError("grid axis faces must increase strictly");
    Axis a;
    const std::size_t n = faces.size() + 1;
    a.nodes.resize(n);
    a.nodes[0] = faces.front();
    a.nodes[n - 1] = faces.back();
    for (std::size_t i = 1; i + 1 < n; ++i) a.nodes[i] = 0.5 * (faces[i - 1] + faces[i]);
    a.faces = std::move(faces);
    a.dual.assign(n, 0.0);
    a.inv_left.assign(n, 0.0);
    a.inv_right.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) a.dual[i] = a.faces[i] - a.faces[i - 1];
    for (std::size_t i = 1; i < n; ++i) a.inv_left[i] = 1.0 / (a.nodes[i] - a.nodes[i - 1]);
    for (std::size_t i = 0; i + 1 < n; ++i) a.inv_right[i] = 1.0 / (a.nodes[i + 1] - a.nodes[i]);
    return a;
}

Axis uniform_axis(double lo, double hi, std::size_t n) {
    if (!(hi > lo) || n < 3) throw DomainError("uniform axis: empty range");
    const std::size_t cells = n - 2;
    std::vector<double> f(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) f[i] = lo + (hi - lo) * double(i) / double(cells);
    f.back() = hi;
    return make_axis(std::move(f));
}

Axis graded_axis(double lo, double hi, std::size_t n, const std::vector<double>& foci,
                 const std::vector<double>& focus_spacing) {
    if (!(hi > lo) || n < 8) throw DomainError("graded axis: bad range or size");
    if (foci.empty() || foci.size() != focus_spacing.size()) return uniform_axis(lo, hi, n);
    const std::size_t cells = n - 2;
    const double hmin = *std::min_element(focus_spacing.begin(), focus_spacing.end());
    if ((hi - lo) / hmin <= double(cells)) return uniform_axis(lo, hi, n);

    constexpr std::size_t kSamples = 1 << 16;
    std::vector<double> s(kSamples + 1), cum(kSamples + 1);
    for (std::size_t i = 0; i <= kSamples; ++i) s[i] = lo + (hi - lo) * double(i) / double(kSamples);
    auto density = [&](double x, double gamma) {
        double h = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < foci.size(); ++k) h = std::min(h, focus_spacing[k] + gamma * std::abs(x - foci[k]));
        return 1.0 / h;
    };
    auto count = [&](double gamma) {
        cum[0] = 0.0;
        double prev = density(s[0], gamma);
        for (std::size_t i = 1; i <= kSamples; ++i) {
            const double cur = density(s[i], gamma);
            cum[i] = cum[i - 1] + 0.5 * (prev + cur) * (s[i] - s[i - 1]);
            prev = cur;
        }
        return cum[kSamples];
    };
    double g_lo = 0.0, g_hi = 1.0;
    while (count(g_hi) > double(cells)) g_hi *= 2.0;
    for (int it = 0; it < 200 && g_hi - g_lo > 1e-15 * g_hi; ++it) {
        const double mid = 0.5 * (g_lo + g_hi);
        (count(mid) > double(cells) ? g_lo : g_hi) = mid;
    }
    const double total = count(g_hi);
    std::vector<double> f(cells + 1);
    f[0] = lo;
    f[cells] = hi;
    std::size_t j = 0;
    for (std::size_t i = 1; i < cells; ++i) {
        const double target = total * double(i) / double(cells);
        while (cum[j + 1] < target) ++j;
        const double t = (target - cum[j]) / (cum[j + 1] - cum[j]);
        f[i] = s[j] + t * (s[j + 1] - s[j]);
    }
    return make_axis(std::move(f));
}

Grid3D::Grid3D(Axis x, Axis y, Axis z) : axes_{std::move(x), std::move(y), std::move(z)} {
    nx_ = axes_[0].size();
    ny_ = axes_[1].size();
    nz_ = axes_[2].size();
    n_ = nx_ * ny_ * nz_;
    volume_.assign(n_, 0.0);
    for (std::size_t k = 1; k + 1 < nz_; ++k)
        for (std::size_t j = 1; j + 1 < ny_; ++j)
            for (std::size_t i = 1; i + 1 < nx_; ++i)
                volume_[index(i, j, k)] = axes_[0].dual[i] * axes_[1].dual[j] * axes_[2].dual[k];
}

Vec3 Grid3D::point(std::size_t idx) const {
    const auto [i, j, k] = ijk(idx);
    return {axes_[0].nodes[i], axes_[1].nodes[j], axes_[2].nodes[k]};
}

std::array<std::array<double, 2>, 3> Grid3D::cell(std::size_t idx) const {
    const auto c = ijk(idx);
    std::array<std::array<double, 2>, 3> b{};
    for (int d = 0; d < 3; ++d) {
        const Axis& a = axes_[d];
        const std::size_t i = c[d];
        b[d] = {a.face_lo(i), a.face_hi(i)};
    }
    return b;
}

std::size_t Grid3D::locate(const Vec3& x) const {
    std::array<std::size_t, 3> c{};
    for (int d = 0; d < 3; ++d) {
        const auto& nodes = axes_[d].nodes;
        const std::size_t n = nodes.size();
        std::size_t best = 1;
        for (std::size_t i = 1; i + 1 < n; ++i)
            if (x[d] >= axes_[d].face_lo(i)) best = i;
        c[d] = std::min(best, n - 2);
    }
    return index(c[0], c[1], c[2]);
}

Vec3 Grid3D::box_center() const {
    return {0.5 * (axes_[0].lo() + axes_[0].hi()), 0.5 * (axes_[1].lo() + axes_[1].hi()),
            0.5 * (axes_[2].lo() + axes_[2].hi())};
}

bool Grid3D::same_layout(const Grid3D& o) const {
    for (int d = 0; d < 3; ++d)
        if (axes_[d].nodes != o.axes_[d].nodes) return false;
    return true;
}

ScalarField3D::ScalarField3D(std::shared_ptr<const Grid3D> g, double fill) : grid(std::move(g)) {
    values.assign(grid->size(), fill);
}

double ScalarField3D::integral() const {
    const auto& vol = grid->volumes();
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (vol[i] > 0.0) s += vol[i] * values[i];
    return s;
}

void dump_field(const ScalarField3D& f, const std::string& prefix) {
    {
        std::ofstream out(prefix + ".bin", std::ios::binary);
        if (!out) throw DomainError("cannot open " + prefix + ".bin");
        out.write(reinterpret_cast<const char*>(f.values.data()),
                  static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    }
    nlohmann::json j;
    const auto d = f.grid->dims();
    j["dims"] = {d[0], d[1], d[2]};
    j["dtype"] = "float64-le";
    j["order"] = "x-fastest";
    nlohmann::json box = nlohmann::json::array(), spacing = nlohmann::json::array(), axes = nlohmann::json::array();
    for (int a = 0; a < 3; ++a) {
        const Axis& ax = f.grid->axis(a);
        box.push_back({ax.lo(), ax.hi()});
        spacing.push_back({{"min", ax.min_spacing()}, {"max", ax.max_spacing()}});
        axes.push_back(ax.nodes);
    }
    j["box"] = box;
    j["spacing"] = spacing;
    j["nodes"] = axes;
    write_text_file(prefix + ".json", canonical_dump(j));
}

}  // namespace tflab
