#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "tflab/error.hpp"
#include "tflab/kernels.hpp"
#include "tflab/molecule.hpp"
#include "tflab/parallel.hpp"
#include "tflab/thermo.hpp"

namespace tflab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kNeighbourRing = 2;

// Full Gauss-Legendre rule on [0, 1].
template <int N>
void gauss_rule(std::vector<double>& x, std::vector<double>& w) {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    x.clear();
    w.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) {
            x.push_back(0.5);
            w.push_back(0.5 * wt[i]);
            continue;
        }
        x.push_back(0.5 - 0.5 * a[i]);
        w.push_back(0.5 * wt[i]);
        x.push_back(0.5 + 0.5 * a[i]);
        w.push_back(0.5 * wt[i]);
    }
}

// Electron share of each atom used for estimates: min(N, Z) split in proportion to Z_m.
std::vector<double> proportional_split(const NuclearConfiguration& c) {
    const double n = std::min(c.electron_count(), c.total_charge());
    std::vector<double> out;
    for (double z : c.charges()) out.push_back(n * z / c.total_charge());
    return out;
}

double box_margin(const NuclearConfiguration& c, const GridSpec& spec) {
    const auto split = proportional_split(c);
    const double q = double(c.spin_factor());
    const double x_tail = std::cbrt(576.0 / spec.tail_loss);
    double margin = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
        const double z = c.charges()[m];
        const double b = tf_length_scale(z, q);
        double mm = std::max(30.0 * std::cbrt(1.0 / z), x_tail * b);
        if (split[m] < z * (1.0 - 1e-9) && split[m] > 0.0) {
            const double rb = solve_atom(z, split[m], q).r_bar();
            mm = std::min(mm, 3.0 * std::max(rb, 10.0 * std::cbrt(1.0 / z)));
        }
        margin = std::max(margin, mm);
    }
    return margin;
}

}  // namespace

nlohmann::json GridSpec::to_json() const {
    nlohmann::json j;
    j["dims"] = {dims[0], dims[1], dims[2]};
    if (!auto_box) j["box"] = {{box[0][0], box[0][1]}, {box[1][0], box[1][1]}, {box[2][0], box[2][1]}};
    j["focus_spacing"] = focus_spacing;
    j["uniform"] = uniform;
    j["tail_loss"] = tail_loss;
    return j;
}

GridSpec GridSpec::from_json(const nlohmann::json& j) {
    GridSpec s;
    if (j.contains("dims")) {
        const auto& d = j.at("dims");
        if (d.is_number()) s.dims = {d.get<std::size_t>(), d.get<std::size_t>(), d.get<std::size_t>()};
        else if (d.size() == 3) s.dims = {d[0].get<std::size_t>(), d[1].get<std::size_t>(), d[2].get<std::size_t>()};
        else throw DomainError("grid.dims must be a number or a list of 3");
    }
    if (j.contains("box")) {
        const auto& b = j.at("box");
        s.auto_box = false;
        if (b.is_number()) {
            const double h = b.get<double>();
            for (auto& ax : s.box) ax = {-h, h};
        } else if (b.size() == 3) {
            for (std::size_t d = 0; d < 3; ++d) s.box[d] = {b[d][0].get<double>(), b[d][1].get<double>()};
        } else {
            throw DomainError("grid.box must be a half-width or three [lo, hi] pairs");
        }
    }
    s.focus_spacing = j.value("focus_spacing", s.focus_spacing);
    s.uniform = j.value("uniform", s.uniform);
    s.tail_loss = j.value("tail_loss", s.tail_loss);
    for (auto n : s.dims)
        if (n < 8) throw DomainError("grid dims must be at least 8 per axis");
    return s;
}

nlohmann::json MoleculeTolerances::to_json() const {
    nlohmann::json j;
    j["method"] = method == Method::Newton ? "newton" : "picard";
    j["energy_rtol"] = energy_rtol;
    j["residual"] = residual;
    j["charge_rtol"] = charge_rtol;
    j["cg_rtol"] = cg_rtol;
    j["max_iterations"] = max_iterations;
    j["max_nu_steps"] = max_nu_steps;
    j["damping"] = damping;
    j["boundary_mass"] = boundary_mass;
    return j;
}

MoleculeTolerances MoleculeTolerances::from_json(const nlohmann::json& j) {
    MoleculeTolerances t;
    if (j.contains("method")) {
        const auto m = j.at("method").get<std::string>();
        if (m == "newton") t.method = Method::Newton;
        else if (m == "picard") t.method = Method::Picard;
        else throw DomainError("tol.method must be newton or picard");
    }
    t.energy_rtol = j.value("energy_rtol", t.energy_rtol);
    t.residual = j.value("residual", t.residual);
    t.charge_rtol = j.value("charge_rtol", t.charge_rtol);
    t.cg_rtol = j.value("cg_rtol", t.cg_rtol);
    t.max_iterations = j.value("max_iterations", t.max_iterations);
    t.max_nu_steps = j.value("max_nu_steps", t.max_nu_steps);
    t.damping = j.value("damping", t.damping);
    t.boundary_mass = j.value("boundary_mass", t.boundary_mass);
    return t;
}

std::shared_ptr<const Grid3D> build_grid(const NuclearConfiguration& c, const GridSpec& spec) {
    if (c.size() == 0) throw DomainError("configuration has no nuclei");
    for (auto n : spec.dims)
        if (n < 8) throw DomainError("grid dims must be at least 8 per axis");
    std::array<std::array<double, 2>, 3> box = spec.box;
    if (spec.auto_box) {
        const double margin = box_margin(c, spec);
        for (std::size_t d = 0; d < 3; ++d) {
            double lo = c.positions()[0][d], hi = lo;
            for (const auto& y : c.positions()) {
                lo = std::min(lo, y[d]);
                hi = std::max(hi, y[d]);
            }
            box[d] = {lo - margin, hi + margin};
        }
    }
    for (std::size_t d = 0; d < 3; ++d) {
        if (!(box[d][1] > box[d][0])) throw DomainError("grid box bounds must increase");
        for (const auto& y : c.positions())
            if (!(y[d] > box[d][0] && y[d] < box[d][1])) throw DomainError("nucleus outside the grid box");
    }
    const double q = double(c.spin_factor());
    std::array<Axis, 3> axes;
    for (std::size_t d = 0; d < 3; ++d) {
        if (spec.uniform) {
            axes[d] = uniform_axis(box[d][0], box[d][1], spec.dims[d]);
            continue;
        }
        std::map<double, double> foci;
        for (std::size_t m = 0; m < c.size(); ++m) {
            const double h = spec.focus_spacing * tf_length_scale(c.charges()[m], q);
            auto [it, fresh] = foci.emplace(c.positions()[m][d], h);
            if (!fresh) it->second = std::min(it->second, h);
        }
        std::vector<double> fx, fh;
        for (const auto& [x, h] : foci) {
            fx.push_back(x);
            fh.push_back(h);
        }
        axes[d] = graded_axis(box[d][0], box[d][1], spec.dims[d], fx, fh);
    }
    return std::make_shared<const Grid3D>(std::move(axes[0]), std::move(axes[1]), std::move(axes[2]));
}

MoleculeDiscretization::MoleculeDiscretization(const NuclearConfiguration& config, const GridSpec& spec)
    : config_(config), spec_(spec) {
    grid_ = build_grid(config, spec);
    const Grid3D& g = *grid_;
    Vec3 center{0.0, 0.0, 0.0};
    for (std::size_t m = 0; m < config.size(); ++m)
        for (std::size_t d = 0; d < 3; ++d) center[d] += config.charges()[m] * config.positions()[m][d];
    for (double& c : center) c /= config.total_charge();
    lap_ = std::make_unique<GridLaplacian>(grid_, center);

    const auto [nx, ny, nz] = g.dims();
    special_.assign(g.size(), -1);
    // cell kind: 2 = holds a nucleus (index in owner), 1 = neighbour
    std::map<std::size_t, std::size_t> owner;
    std::map<std::size_t, int> kind;
    for (std::size_t m = 0; m < config.size(); ++m) {
        const std::size_t a = g.locate(config.positions()[m]);
        if (owner.count(a)) throw DomainError("two nuclei share a grid cell: separation below grid resolution");
        owner[a] = m;
        kind[a] = 2;
    }
    for (const auto& [a, m] : owner) {
        const auto c = g.ijk(a);
        for (int dk = -kNeighbourRing; dk <= kNeighbourRing; ++dk)
            for (int dj = -kNeighbourRing; dj <= kNeighbourRing; ++dj)
                for (int di = -kNeighbourRing; di <= kNeighbourRing; ++di) {
                    const long i = long(c[0]) + di, j = long(c[1]) + dj, k = long(c[2]) + dk;
                    if (i < 1 || j < 1 || k < 1 || i + 1 >= long(nx) || j + 1 >= long(ny) || k + 1 >= long(nz)) continue;
                    const std::size_t b = g.index(std::size_t(i), std::size_t(j), std::size_t(k));
                    if (!kind.count(b)) kind[b] = 1;
                }
    }
    std::vector<double> gx6, gw6, gx8, gw8;
    gauss_rule<6>(gx6, gw6);
    gauss_rule<8>(gx8, gw8);
    offsets_.push_back(0);
    for (const auto& [a, k] : kind) {
        special_[a] = int(special_nodes_.size());
        special_nodes_.push_back(a);
        const auto cb = g.cell(a);
        // Six pyramids with apex p, the point of the cell nearest to the closest nucleus;
        // x = p + t (F - p) with t = tau^2 clusters nodes at the apex.
        const Vec3 c = g.point(a);
        std::size_t near = k == 2 ? owner.at(a) : 0;
        if (k != 2)
            for (std::size_t m = 1; m < config.size(); ++m)
                if (distance(c, config.positions()[m]) < distance(c, config.positions()[near])) near = m;
        Vec3 y = config.positions()[near];
        for (std::size_t d = 0; d < 3; ++d) y[d] = std::clamp(y[d], cb[d][0], cb[d][1]);
        for (std::size_t d = 0; d < 3; ++d)
            for (int side = 0; side < 2; ++side) {
                const double plane = cb[d][std::size_t(side)];
                const double h = std::abs(plane - y[d]);
                if (h <= 1e-14 * (cb[d][1] - cb[d][0])) continue;
                const std::size_t e1 = (d + 1) % 3, e2 = (d + 2) % 3;
                const double l1 = cb[e1][1] - cb[e1][0], l2 = cb[e2][1] - cb[e2][0];
                for (std::size_t p = 0; p < gx6.size(); ++p)
                    for (std::size_t r = 0; r < gx6.size(); ++r) {
                        Vec3 f{};
                        f[d] = plane;
                        f[e1] = cb[e1][0] + l1 * gx6[p];
                        f[e2] = cb[e2][0] + l2 * gx6[r];
                        for (std::size_t s = 0; s < gx8.size(); ++s) {
                            const double tau = gx8[s], t = tau * tau;
                            Vec3 x{};
                            for (std::size_t e = 0; e < 3; ++e) x[e] = y[e] + t * (f[e] - y[e]);
                            qx_.push_back(x);
                            qw_.push_back(l1 * l2 * gw6[p] * gw6[r] * gw8[s] * 2.0 * std::pow(tau, 5) * h);
                        }
                    }
            }
        offsets_.push_back(qx_.size());
    }
    const auto split = proportional_split(config);
    for (std::size_t m = 0; m < config.size(); ++m) {
        atoms_.push_back(solve_atom(config.charges()[m], split[m], q()));
        const auto& at = atoms_.back();
        ref_.charge += at.charge();
        ref_.kinetic += at.energy().kinetic;
        ref_.pressure += 2.0 / 3.0 * at.energy().kinetic;
        ref_.attraction -= at.energy().attraction;
        ref_.coulomb += 2.0 * at.energy().repulsion;
        ref_.rho43 += at.rho43();
    }
    qwref_.resize(qx_.size());
    for (std::size_t i = 0; i < qx_.size(); ++i) qwref_[i] = reference_W(qx_[i]);

    const auto& vol = g.volumes();
    wref_node_.assign(g.size(), 0.0);
    p_weight_.assign(g.size(), 0.0);
    for (std::size_t a = 0; a < g.size(); ++a) {
        if (!(vol[a] > 0.0) || special_[a] >= 0) continue;
        wref_node_[a] = reference_W(g.point(a));
        p_weight_[a] = vol[a] * q() / (15.0 * kPi * kPi);
    }
    m_ref_ = cell_integrals([&](const Vec3& x) {
        double r = 0.0;
        for (std::size_t m = 0; m < atoms_.size(); ++m) r += atoms_[m].rho(distance(x, config_.positions()[m]));
        return r;
    });
    for (std::size_t k = 1; k + 1 < nz; ++k)
        for (std::size_t j = 1; j + 1 < ny; ++j)
            for (std::size_t i = 1; i + 1 < nx; ++i)
                if (i == 1 || j == 1 || k == 1 || i + 2 == nx || j + 2 == ny || k + 2 == nz)
                    boundary_layer_.push_back(g.index(i, j, k));
}

double MoleculeDiscretization::reference_W(const Vec3& x) const {
    double w = 0.0;
    for (std::size_t m = 0; m < atoms_.size(); ++m) w += atoms_[m].W(distance(x, config_.positions()[m]));
    return w;
}

double MoleculeDiscretization::reference_phi(const Vec3& x) const {
    double v = 0.0;
    for (std::size_t m = 0; m < atoms_.size(); ++m) v += atoms_[m].hartree(distance(x, config_.positions()[m]));
    return v;
}

void MoleculeDiscretization::cell_charges(const GridLaplacian::Vec& phi, double nu, std::vector<double>& m1,
                                          std::vector<double>* m2) const {
    const std::size_t n = grid_->size();
    const auto& vol = grid_->volumes();
    const double q = this->q();
    const double coef = q / (6.0 * kPi * kPi);
    m1.resize(n);
    std::vector<double> scratch;
    std::vector<double>& d = m2 ? *m2 : scratch;
    d.resize(n);
    const auto& kt = kernels::active();
    parallel_chunks(chunk_count(n), [&](std::size_t c) {
        const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
        kt.tf_density(wref_node_.data() + lo, phi.v.data() + lo, nu, coef, m1.data() + lo, d.data() + lo, hi - lo);
        kt.mul(m1.data() + lo, vol.data() + lo, m1.data() + lo, hi - lo);
        kt.mul(d.data() + lo, vol.data() + lo, d.data() + lo, hi - lo);
    });
    parallel_chunks(special_nodes_.size(), [&](std::size_t s) {
        const std::size_t a = special_nodes_[s];
        double acc1 = 0.0, acc2 = 0.0;
        for (std::size_t k = offsets_[s]; k < offsets_[s + 1]; ++k) {
            const double w = qwref_[k] - phi.v[a] + nu;
            acc1 += qw_[k] * pressure_prime(w, q);
            acc2 += qw_[k] * pressure_second(w, q);
        }
        m1[a] = acc1;
        d[a] = acc2;
    });
}

double MoleculeDiscretization::pressure_integral(const GridLaplacian::Vec& phi, double nu) const {
    const std::size_t n = grid_->size();
    const auto& kt = kernels::active();
    const double q = this->q();
    const double regular = parallel_sum(n, [&](std::size_t lo, std::size_t hi) {
        return kt.tf_power52_sum(wref_node_.data() + lo, phi.v.data() + lo, nu, p_weight_.data() + lo, hi - lo);
    });
    std::vector<double> part(special_nodes_.size());
    parallel_chunks(special_nodes_.size(), [&](std::size_t s) {
        const std::size_t a = special_nodes_[s];
        double acc = 0.0;
        for (std::size_t k = offsets_[s]; k < offsets_[s + 1]; ++k) acc += qw_[k] * pressure(qwref_[k] - phi.v[a] + nu, q);
        part[s] = acc;
    });
    double total = regular;
    for (double v : part) total += v;
    return total;
}

MoleculeDiscretization::Sums MoleculeDiscretization::sums(const GridLaplacian::Vec& delta, double nu,
                                                          double scale) const {
    const std::size_t n = grid_->size();
    const auto& vol = grid_->volumes();
    const double q = this->q();
    const double s53 = std::pow(scale, 5.0 / 3.0);
    constexpr std::size_t kFields = 7;
    // Integrand minus its atomic self parts at one point.
    auto point = [&](double weight, const Vec3& x, double wref, double dl, std::array<double, kFields>& acc) {
        double v = 0.0, phi_ref = 0.0, rho_ref = 0.0, tau_ref = 0.0, p_ref = 0.0, r43_ref = 0.0, vrho = 0.0, prho = 0.0;
        for (std::size_t m = 0; m < atoms_.size(); ++m) {
            const auto& at = atoms_[m];
            const double r = distance(x, config_.positions()[m]);
            const double vm = at.Z() / r, pm = at.hartree(r);
            v += vm;
            phi_ref += pm;
            const PressurePair pp = pressure_pair(at.W(r) + at.nu(), q);
            if (pp.dP > 0.0) {
                const double wm = at.W(r) + at.nu();
                rho_ref += pp.dP;
                tau_ref += wm * pp.dP - pp.P;
                p_ref += pp.P;
                r43_ref += std::cbrt(pp.dP) * pp.dP;
                vrho += vm * pp.dP;
                prho += pm * pp.dP;
            }
        }
        const double w = wref - dl + nu;
        const PressurePair p = pressure_pair(w, q);
        const double rho = scale * p.dP;
        acc[0] += weight * (rho - rho_ref);
        acc[1] += weight * (p.P - p_ref);
        acc[2] += weight * (v * rho - vrho);
        acc[3] += weight * (s53 * (w * p.dP - p.P) - tau_ref);
        acc[4] += weight * (std::cbrt(rho) * rho - r43_ref);
        acc[5] += weight * (2.0 * phi_ref * rho - phi_ref * rho_ref - prho);
        acc[6] += weight * (phi_ref * rho_ref - prho);
    };
    const std::size_t chunks = chunk_count(n);
    std::vector<std::array<double, kFields>> part(chunks + special_nodes_.size());
    parallel_chunks(chunks, [&](std::size_t c) {
        std::array<double, kFields> acc{};
        const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
        for (std::size_t a = lo; a < hi; ++a)
            if (vol[a] > 0.0 && special_[a] < 0) point(vol[a], grid_->point(a), wref_node_[a], delta.v[a], acc);
        part[c] = acc;
    });
    parallel_chunks(special_nodes_.size(), [&](std::size_t s) {
        std::array<double, kFields> acc{};
        const std::size_t a = special_nodes_[s];
        for (std::size_t k = offsets_[s]; k < offsets_[s + 1]; ++k) point(qw_[k], qx_[k], qwref_[k], delta.v[a], acc);
        part[chunks + s] = acc;
    });
    std::array<double, kFields> tot{};
    for (const auto& p : part)
        for (std::size_t f = 0; f < kFields; ++f) tot[f] += p[f];
    Sums out;
    out.charge = ref_.charge + tot[0];
    out.pressure = ref_.pressure + tot[1];
    out.attraction = ref_.attraction + tot[2];
    out.kinetic = ref_.kinetic + tot[3];
    out.rho43 = ref_.rho43 + tot[4];
    out.coulomb = ref_.coulomb + tot[5];
    out.coulomb_ref = ref_.coulomb + tot[6];
    for (std::size_t a : boundary_layer_) {
        const double w = wref_node_[a] - delta.v[a] + nu;
        out.boundary_layer += vol[a] * scale * pressure_prime(w, q);
    }
    return out;
}

std::vector<double> MoleculeDiscretization::weighted_charges(const GridLaplacian::Vec& delta, double nu,
                                                             const std::function<double(const Vec3&)>& f) const {
    const std::size_t n = grid_->size();
    const auto& vol = grid_->volumes();
    const double q = this->q();
    std::vector<double> out(n, 0.0);
    parallel_chunks(chunk_count(n), [&](std::size_t c) {
        const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
        for (std::size_t a = lo; a < hi; ++a) {
            if (!(vol[a] > 0.0) || special_[a] >= 0) continue;
            const double rho = pressure_prime(wref_node_[a] - delta.v[a] + nu, q);
            if (rho > 0.0) out[a] = vol[a] * rho * f(grid_->point(a));
        }
    });
    parallel_chunks(special_nodes_.size(), [&](std::size_t s) {
        const std::size_t a = special_nodes_[s];
        double acc = 0.0;
        for (std::size_t k = offsets_[s]; k < offsets_[s + 1]; ++k) {
            const double rho = pressure_prime(qwref_[k] - delta.v[a] + nu, q);
            if (rho > 0.0) acc += qw_[k] * rho * f(qx_[k]);
        }
        out[a] = acc;
    });
    return out;
}

double MoleculeDiscretization::phi_sub(const GridLaplacian::Vec& delta, double nu) const {
    const Sums s = sums(delta, nu);
    double cross = 0.0;
    for (std::size_t a = 0; a < m_ref_.size(); ++a) cross += m_ref_[a] * delta.v[a];
    return -s.pressure - 0.5 * s.coulomb_ref - cross - lap_->energy(delta) / (8.0 * kPi);
}

GridLaplacian::Vec MoleculeDiscretization::hartree(const std::vector<double>& m) const {
    auto b = lap_->make_vec();
    for (std::size_t a = 0; a < m.size(); ++a) b.v[a] = 4.0 * kPi * m[a];
    for (std::size_t bn : lap_->boundary_nodes()) b.v[bn] = 0.0;
    auto x = lap_->make_vec();
    const auto cg = lap_->solve(x, b, nullptr, 1e-13, 200);
    if (!cg.converged && cg.residual > 1e-10) throw ConvergenceError("Hartree solve did not converge");
    return x;
}

double MoleculeDiscretization::coulomb(const std::vector<double>& mf, const std::vector<double>& mg) const {
    const auto phi = hartree(mg);
    return parallel_sum(mf.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t a = lo; a < hi; ++a) s += mf[a] * phi.v[a];
        return s;
    });
}

double MoleculeDiscretization::phi_star(const GridLaplacian::Vec& delta, double nu, double scale) const {
    const Sums s = sums(delta, nu, scale);
    std::vector<double> m;
    cell_charges(delta, nu, m);
    for (std::size_t a = 0; a < m.size(); ++a) m[a] = scale * m[a] - m_ref_[a];
    const double D = s.coulomb + coulomb(m, m);
    return s.kinetic - s.attraction + 0.5 * D - nu * s.charge;
}

}  // namespace tflab
