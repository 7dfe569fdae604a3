#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "tflab/error.hpp"
#include "tflab/molecule.hpp"

namespace tflab {
namespace {

// Sandwich samples stay within this many TF lengths of a nucleus; further out W is below the
// grid error of the correction potential.
constexpr double kSandwichReach = 20.0;

constexpr double kPi = std::numbers::pi;

// Electron number of an atom of charge Z whose chemical potential is nu (< 0).
double electrons_at_nu(double Z, double nu, double q) {
    if (!(nu < 0.0)) return Z;
    auto f = [&](double t) { return chemical_potential(Z, t * Z, q) - nu; };
    // the ion shooting loses the zero of chi just below neutrality
    double lo = 1e-9, hi = 1.0 - 1e-5;
    if (f(lo) >= 0.0) return lo * Z;
    if (f(hi) <= 0.0) return hi * Z;
    boost::math::tools::eps_tolerance<double> tol(46);
    std::uintmax_t it = 100;
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, it);
    return 0.5 * (r.first + r.second) * Z;
}

std::vector<double> neutral_split(const std::vector<double>& Z, double N) {
    double total = 0.0;
    for (double z : Z) total += z;
    std::vector<double> out;
    for (double z : Z) out.push_back(z * N / total);
    return out;
}

}  // namespace

std::vector<double> optimal_allocation(const std::vector<double>& Z, double N, double q, double* common_nu) {
    if (Z.empty()) throw DomainError("optimal_allocation: no atoms");
    double total = 0.0;
    for (double z : Z) {
        if (!(z > 0.0)) throw DomainError("optimal_allocation: charges must be positive");
        total += z;
    }
    if (!(N > 0.0)) throw DomainError("optimal_allocation: N must be positive");
    if (common_nu) *common_nu = 0.0;
    if (N >= total) return neutral_split(Z, N);
    // nu_m(N_m) = Z_m^{4/3} g(N_m / Z_m): the common ratio N / Z brackets the common nu.
    const double g = chemical_potential(1.0, N / total, q);
    double lo = 0.0, hi = -std::numeric_limits<double>::infinity();
    for (double z : Z) {
        lo = std::min(lo, std::pow(z, 4.0 / 3.0) * g);
        hi = std::max(hi, std::pow(z, 4.0 / 3.0) * g);
    }
    auto excess = [&](double nu) {
        double s = -N;
        for (double z : Z) s += electrons_at_nu(z, nu, q);
        return s;
    };
    double nu = lo;
    if (hi - lo > 1e-14 * std::abs(lo)) {
        boost::math::tools::eps_tolerance<double> tol(44);
        std::uintmax_t it = 100;
        const auto r = boost::math::tools::toms748_solve(excess, lo, hi, tol, it);
        nu = 0.5 * (r.first + r.second);
    }
    std::vector<double> out;
    for (double z : Z) out.push_back(electrons_at_nu(z, nu, q));
    // remove the residual of the root search from the largest share
    double s = 0.0;
    for (double v : out) s += v;
    *std::max_element(out.begin(), out.end()) += N - s;
    if (common_nu) *common_nu = nu;
    return out;
}

ExcessEnergy excess_energy(const MolecularTFSolution& sol) {
    const auto& c = sol.config;
    if (c.size() < 2) throw DomainError("excess_energy: needs at least two nuclei");
    if (!sol.disc) throw DomainError("excess_energy: solution carries no discretization");
    const auto& d = *sol.disc;
    const double q = double(c.spin_factor());
    ExcessEnergy out;
    out.allocation = optimal_allocation(c.charges(), c.electron_count(), q, &out.common_nu);
    std::vector<AtomicTFSolution> atoms;
    for (std::size_t m = 0; m < c.size(); ++m) {
        atoms.push_back(solve_atom(c.charges()[m], out.allocation[m], q));
        out.atoms_energy += atoms.back().energy().total;
    }
    out.molecule_hat_energy = sol.hat_energy;
    out.excess = sol.hat_energy - out.atoms_energy;

    std::vector<double> m1;
    d.cell_charges(sol.delta, sol.nu, m1);
    std::vector<double> bar;
    if (c.electron_count() >= c.total_charge()) {
        bar = d.reference_charges();
    } else {
        bar = d.cell_integrals([&](const Vec3& x) {
            double r = 0.0;
            for (std::size_t m = 0; m < atoms.size(); ++m) r += atoms[m].rho(distance(x, c.positions()[m]));
            return r;
        });
    }
    for (std::size_t a = 0; a < m1.size(); ++a) m1[a] -= bar[a];
    out.d_distance = d.coulomb(m1, m1);
    out.d_ratio = out.excess > 0.0 ? out.d_distance / out.excess : std::numeric_limits<double>::infinity();
    return out;
}

ExcessEnergy excess_energy(const NuclearConfiguration& config, const GridSpec& spec, const MoleculeTolerances& tol) {
    if (config.size() < 2) throw DomainError("excess_energy: needs at least two nuclei");
    return excess_energy(solve_molecule(config, spec, tol));
}

std::vector<BindingPoint> binding_curve(const std::vector<double>& Z, double N, int q,
                                        const std::vector<double>& separations, const GridSpec& spec,
                                        const MoleculeTolerances& tol) {
    if (Z.size() != 2) throw DomainError("binding_curve: expects two nuclear charges");
    std::vector<BindingPoint> out;
    for (double a : separations) {
        if (!(a > 0.0)) throw DomainError("binding_curve: separations must be positive");
        const auto c = NuclearConfiguration::create(Z, {Vec3{-0.5 * a, 0.0, 0.0}, Vec3{0.5 * a, 0.0, 0.0}}, N, q);
        const auto sol = solve_molecule(c, spec, tol);
        out.push_back({a, sol.energy.total, sol.hat_energy});
    }
    return out;
}

ScalingCheck binding_scaling_check(const NuclearConfiguration& config, double lambda, const GridSpec& spec,
                                   const MoleculeTolerances& tol) {
    if (!(lambda > 0.0)) throw DomainError("binding_scaling_check: lambda must be positive");
    GridSpec stretched = spec;
    if (!spec.auto_box)
        for (auto& ax : stretched.box)
            for (double& v : ax) v *= lambda;
    const auto a = solve_molecule(config.scaled(lambda, 1.0), stretched, tol);
    const double l3 = lambda * lambda * lambda;
    const auto b = solve_molecule(config.scaled(1.0, l3), spec, tol);
    ScalingCheck out;
    out.lhs = std::pow(lambda, 7.0) * a.hat_energy;
    out.rhs = b.hat_energy;
    out.relative_residual = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.rhs), 1e-300);
    return out;
}

std::vector<std::vector<double>> cluster_weights(const MolecularTFSolution& sol, const std::vector<int>& cluster,
                                                 double width) {
    const auto& c = sol.config;
    if (cluster.size() != c.size()) throw DomainError("cluster_weights: one cluster index per nucleus");
    int k_count = 0;
    for (int k : cluster) {
        if (k < 0) throw DomainError("cluster_weights: negative cluster index");
        k_count = std::max(k_count, k + 1);
    }
    if (width <= 0.0) width = c.size() > 1 ? 0.25 * c.min_distance() : 1.0;
    const Grid3D& g = *sol.W.grid;
    std::vector<std::vector<double>> w(static_cast<std::size_t>(k_count), std::vector<double>(g.size(), 0.0));
    std::vector<double> dist(static_cast<std::size_t>(k_count));
    for (std::size_t a = 0; a < g.size(); ++a) {
        const Vec3 x = g.point(a);
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        for (std::size_t m = 0; m < c.size(); ++m) {
            auto& dk = dist[std::size_t(cluster[m])];
            dk = std::min(dk, distance(x, c.positions()[m]));
        }
        const double dmin = *std::min_element(dist.begin(), dist.end());
        double s = 0.0;
        for (std::size_t k = 0; k < dist.size(); ++k) {
            w[k][a] = std::exp(-(dist[k] - dmin) / width);
            s += w[k][a];
        }
        for (auto& wk : w) wk[a] /= s;
    }
    return w;
}

InterclusterEnergy intercluster_energy(const MolecularTFSolution& sol, const std::vector<int>& cluster,
                                       const std::vector<std::vector<double>>& weights) {
    if (!sol.disc) throw DomainError("intercluster_energy: solution carries no discretization");
    const auto& d = *sol.disc;
    const auto& c = sol.config;
    const Grid3D& g = d.grid();
    if (cluster.size() != c.size()) throw DomainError("intercluster_energy: one cluster index per nucleus");
    const std::size_t K = weights.size();
    for (int k : cluster)
        if (k < 0 || std::size_t(k) >= K) throw DomainError("intercluster_energy: cluster index without weights");
    const auto& vol = g.volumes();
    for (const auto& wk : weights)
        if (wk.size() != g.size()) throw DomainError("intercluster_energy: weights do not match the grid");
    for (std::size_t a = 0; a < g.size(); ++a) {
        if (!(vol[a] > 0.0)) continue;
        double s = 0.0;
        for (const auto& wk : weights) s += wk[a];
        if (std::abs(s - 1.0) > 1e-9) throw DomainError("intercluster_energy: partition weights do not sum to 1");
    }
    std::vector<double> m1;
    d.cell_charges(sol.delta, sol.nu, m1);
    std::vector<std::vector<double>> mk(K, std::vector<double>(g.size(), 0.0));
    std::vector<GridLaplacian::Vec> pot;
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t a = 0; a < g.size(); ++a) mk[k][a] = weights[k][a] * m1[a];
        pot.push_back(d.hartree(mk[k]));
    }
    // int rho theta_l V_k
    std::vector<std::vector<double>> attract(K, std::vector<double>(K, 0.0));
    for (std::size_t k = 0; k < K; ++k) {
        const auto vk = d.weighted_charges(sol.delta, sol.nu, [&](const Vec3& x) {
            double v = 0.0;
            for (std::size_t m = 0; m < c.size(); ++m)
                if (std::size_t(cluster[m]) == k) v += c.charges()[m] / distance(x, c.positions()[m]);
            return v;
        });
        for (std::size_t l = 0; l < K; ++l)
            for (std::size_t a = 0; a < g.size(); ++a) attract[k][l] += weights[l][a] * vk[a];
    }
    InterclusterEnergy out;
    out.pairs.assign(K, std::vector<double>(K, 0.0));
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t l = k + 1; l < K; ++l) {
            double D = 0.0;
            for (std::size_t a = 0; a < g.size(); ++a) D += mk[k][a] * pot[l].v[a];
            double U = 0.0;
            for (std::size_t m = 0; m < c.size(); ++m)
                for (std::size_t n = 0; n < c.size(); ++n)
                    if (std::size_t(cluster[m]) == k && std::size_t(cluster[n]) == l)
                        U += c.charges()[m] * c.charges()[n] / distance(c.positions()[m], c.positions()[n]);
            const double J = D - attract[k][l] - attract[l][k] + U;
            out.pairs[k][l] = out.pairs[l][k] = J;
            out.total += J;
        }
    const double excess = c.total_charge() - c.electron_count();
    if (c.size() > 1 && excess > 0.0) {
        out.reference = excess * excess / c.half_min_distance();
        out.ratio = out.total / out.reference;
    }
    return out;
}

InterclusterEnergy intercluster_energy(const MolecularTFSolution& sol, const std::vector<int>& cluster) {
    return intercluster_energy(sol, cluster, cluster_weights(sol, cluster));
}

SandwichBounds superposition_sandwich(const MolecularTFSolution& sol) {
    const auto& c = sol.config;
    const double q = double(c.spin_factor());
    std::vector<AtomicTFSolution> atoms;
    for (double z : c.charges()) atoms.push_back(solve_atom(z, electrons_at_nu(z, sol.nu, q), q));
    const Grid3D& g = *sol.W.grid;
    const auto& vol = g.volumes();
    double reach = 0.0;
    for (const auto& at : atoms) reach = std::max(reach, kSandwichReach * at.length_scale());
    std::vector<std::size_t> nodes;
    for (std::size_t a = 0; a < g.size(); ++a) {
        if (!(vol[a] > 0.0)) continue;
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& y : c.positions()) nearest = std::min(nearest, distance(g.point(a), y));
        if (nearest > 1e-12 && nearest <= reach) nodes.push_back(a);
    }
    auto holds = [&](double C) {
        const double eps = 1.0 / C;
        for (std::size_t a : nodes) {
            const Vec3 x = g.point(a);
            double lower = 0.0, upper = 0.0;
            for (std::size_t m = 0; m < atoms.size(); ++m) {
                const double r = distance(x, c.positions()[m]);
                lower += eps * atoms[m].W(C * r);
                upper += C * atoms[m].W(eps * r);
            }
            const double w = sol.W.values[a];
            if (w < lower || w > upper) return false;
        }
        return true;
    };
    SandwichBounds out{1.0, 1.0, true, nodes.size()};
    if (holds(1.0)) return out;
    double lo = 1.0, hi = 2.0;
    while (!holds(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e8) {
            out = {1.0 / hi, hi, false, nodes.size()};
            return out;
        }
    }
    for (int it = 0; it < 60 && hi / lo > 1.0 + 1e-10; ++it) {
        const double mid = std::sqrt(lo * hi);
        (holds(mid) ? hi : lo) = mid;
    }
    out = {1.0 / hi, hi, true, nodes.size()};
    return out;
}

}  // namespace tflab
