#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tflab/coulomb.hpp"
#include "tflab/error.hpp"
#include "tflab/json_util.hpp"
#include "tflab/molecule.hpp"
#include "tflab/parallel.hpp"

namespace tflab {
namespace {

constexpr double kPi = std::numbers::pi;
using Vec = GridLaplacian::Vec;

struct Inner {
    int iterations = 0;
    double residual = 0.0;
};

// sqrt(sum vol ((K phi / (4 pi vol)) - rho)^2) from g = K phi - 4 pi m.
double residual_norm(const Grid3D& grid, const Vec& g) {
    const auto& vol = grid.volumes();
    return std::sqrt(parallel_sum(vol.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t a = lo; a < hi; ++a)
            if (vol[a] > 0.0) s += g.v[a] * g.v[a] / (16.0 * kPi * kPi * vol[a]);
        return s;
    }));
}

class FixedNu {
public:
    FixedNu(const MoleculeDiscretization& d, const MoleculeTolerances& tol) : d_(d), lap_(d.laplacian()), tol_(tol) {
        scale_ = std::max(1.0, std::min(d.config().electron_count(), d.config().total_charge()));
    }

    // (1/8 pi) delta^T K delta + m_ref . delta + int P(W_ref - delta + nu)
    double objective(const Vec& phi, double nu, Vec& kphi) const {
        lap_.apply(phi, kphi);
        const auto& mref = d_.reference_charges();
        double cross = 0.0;
        for (std::size_t a = 0; a < mref.size(); ++a) cross += mref[a] * phi.v[a];
        return lap_.dot(phi, kphi) / (8.0 * kPi) + cross + d_.pressure_integral(phi, nu);
    }

    // g = K delta - 4 pi (m' - m_ref)
    void gradient(const Vec& phi, const Vec& kphi, double nu, Vec& g, std::vector<double>& m1,
                  std::vector<double>* m2) const {
        d_.cell_charges(phi, nu, m1, m2);
        const auto& mref = d_.reference_charges();
        g.v = kphi.v;
        g.s = kphi.s;
        for (std::size_t a = 0; a < g.v.size(); ++a) g.v[a] -= 4.0 * kPi * (m1[a] - mref[a]);
        for (std::size_t b : lap_.boundary_nodes()) g.v[b] = 0.0;
    }

    Inner newton(Vec& phi, double nu) const {
        Inner out;
        std::vector<double> m1, m2, extra(d_.grid().size());
        Vec kphi = lap_.make_vec(), g = lap_.make_vec(), delta = lap_.make_vec(), trial = lap_.make_vec(),
            ktrial = lap_.make_vec(), rhs = lap_.make_vec();
        double J = objective(phi, nu, kphi);
        double res0 = 0.0, j_change = std::numeric_limits<double>::infinity();
        for (int it = 0; it < tol_.max_iterations; ++it) {
            gradient(phi, kphi, nu, g, m1, &m2);
            out.residual = residual_norm(d_.grid(), g);
            out.iterations = it;
            if (it == 0) res0 = std::max(out.residual, 1e-300);
            if (out.residual <= tol_.residual * scale_ && j_change <= tol_.energy_rtol * std::abs(J)) return out;
            for (std::size_t a = 0; a < extra.size(); ++a) extra[a] = 4.0 * kPi * m2[a];
            for (std::size_t a = 0; a < rhs.v.size(); ++a) rhs.v[a] = -g.v[a];
            rhs.s = -g.s;
            std::fill(delta.v.begin(), delta.v.end(), 0.0);
            delta.s = 0.0;
            const double eta = std::max(tol_.cg_rtol, std::min(1e-2, 0.1 * out.residual / res0));
            lap_.solve(delta, rhs, extra.data(), eta, 1000);
            const double slope = lap_.dot(g, delta) / (4.0 * kPi);
            if (!(slope < 0.0)) {
                j_change = 0.0;
                if (out.residual <= tol_.residual * scale_) return out;
                throw ConvergenceError("molecule Newton: no descent direction");
            }
            double t = 1.0, Jt = J;
            bool accepted = false;
            for (int ls = 0; ls < 40; ++ls) {
                trial.v = phi.v;
                trial.s = phi.s;
                lap_.axpy(t, delta, trial);
                Jt = objective(trial, nu, ktrial);
                if (Jt <= J + 1e-4 * t * slope) {
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (!accepted) {
                // round-off floor of the objective
                if (out.residual <= tol_.residual * scale_) return out;
                throw ConvergenceError("molecule Newton: line search failed");
            }
            j_change = std::abs(J - Jt);
            std::swap(phi, trial);
            std::swap(kphi, ktrial);
            J = Jt;
        }
        gradient(phi, kphi, nu, g, m1, nullptr);
        out.residual = residual_norm(d_.grid(), g);
        if (out.residual <= tol_.residual * scale_) return out;
        throw ConvergenceError("molecule Newton: no convergence after max iterations");
    }

    Inner picard(Vec& phi, double nu) const {
        Inner out;
        std::vector<double> m1;
        Vec kphi = lap_.make_vec(), g = lap_.make_vec();
        double alpha = tol_.damping, prev_res = std::numeric_limits<double>::infinity();
        double J = objective(phi, nu, kphi);
        double j_change = std::numeric_limits<double>::infinity();
        for (int it = 0; it < tol_.max_iterations; ++it) {
            gradient(phi, kphi, nu, g, m1, nullptr);
            out.residual = residual_norm(d_.grid(), g);
            out.iterations = it;
            if (out.residual <= tol_.residual * scale_ && j_change <= tol_.energy_rtol * std::abs(J)) return out;
            if (out.residual > prev_res) alpha = std::max(0.5 * alpha, 1e-4);
            prev_res = out.residual;
            const auto& mref = d_.reference_charges();
            for (std::size_t a = 0; a < m1.size(); ++a) m1[a] -= mref[a];
            const Vec next = d_.hartree(m1);
            for (std::size_t a = 0; a < phi.v.size(); ++a) phi.v[a] = (1.0 - alpha) * phi.v[a] + alpha * next.v[a];
            phi.s = (1.0 - alpha) * phi.s + alpha * next.s;
            const double Jn = objective(phi, nu, kphi);
            j_change = std::abs(Jn - J);
            J = Jn;
        }
        throw ConvergenceError("molecule Picard: no convergence after max iterations");
    }

    Inner run(Vec& phi, double nu) const {
        return tol_.method == MoleculeTolerances::Method::Newton ? newton(phi, nu) : picard(phi, nu);
    }

    // d charge / d nu at a converged pair: sum m''(1 - psi), (K + 4 pi M'') psi = 4 pi m''.
    double charge_derivative(const Vec& phi, double nu) const {
        std::vector<double> m1, m2;
        d_.cell_charges(phi, nu, m1, &m2);
        std::vector<double> extra(m2.size());
        Vec rhs = lap_.make_vec(), psi = lap_.make_vec();
        for (std::size_t a = 0; a < m2.size(); ++a) {
            extra[a] = 4.0 * kPi * m2[a];
            rhs.v[a] = extra[a];
        }
        for (std::size_t b : lap_.boundary_nodes()) rhs.v[b] = 0.0;
        lap_.solve(psi, rhs, extra.data(), 1e-8, 1000);
        double s = 0.0;
        for (std::size_t a = 0; a < m2.size(); ++a) s += m2[a] * (1.0 - psi.v[a]);
        return s;
    }

private:
    const MoleculeDiscretization& d_;
    const GridLaplacian& lap_;
    const MoleculeTolerances& tol_;
    double scale_ = 1.0;
};

MolecularTFSolution assemble(std::shared_ptr<const MoleculeDiscretization> disc, Vec phi, double nu,
                             const MoleculeTolerances& tol) {
    const MoleculeDiscretization& d = *disc;
    const Grid3D& grid = d.grid();
    const auto& lap = d.laplacian();
    MolecularTFSolution sol;
    sol.config = d.config();
    sol.grid_spec = d.spec();
    sol.nu = nu;
    const auto s = d.sums(phi, nu);
    std::vector<double> m1;
    d.cell_charges(phi, nu, m1);
    const auto& mref = d.reference_charges();
    std::vector<double> dm(m1.size());
    double cross = 0.0;
    for (std::size_t a = 0; a < m1.size(); ++a) {
        dm[a] = m1[a] - mref[a];
        cross += mref[a] * phi.v[a];
    }
    const double D = s.coulomb + d.coulomb(dm, dm);
    sol.energy.kinetic = s.kinetic;
    sol.energy.attraction = -s.attraction;
    sol.energy.repulsion = 0.5 * D;
    sol.energy.total = s.kinetic - s.attraction + 0.5 * D;
    sol.phi_sub = -s.pressure - 0.5 * s.coulomb_ref - cross - lap.energy(phi) / (8.0 * kPi);
    sol.phi_star = sol.energy.total - nu * s.charge;
    sol.duality_gap = sol.phi_star - sol.phi_sub;
    const double n_eff = std::min(d.config().electron_count(), d.config().total_charge());
    sol.energy.dual = sol.phi_sub + nu * n_eff;
    sol.hat_energy = sol.energy.total + nuclear_repulsion(d.config());
    sol.charge = s.charge;
    sol.rho43 = s.rho43;
    if (s.boundary_layer > tol.boundary_mass * std::max(n_eff, 1e-300))
        throw DomainError("box too small: boundary layer holds " +
                          std::to_string(s.boundary_layer / std::max(n_eff, 1e-300)) + " of the charge");

    auto gptr = d.grid_ptr();
    sol.W = ScalarField3D(gptr);
    sol.rho = ScalarField3D(gptr);
    const auto full = lap.expand(phi);
    const auto& vol = grid.volumes();
    for (std::size_t a = 0; a < grid.size(); ++a) {
        sol.W.values[a] = d.reference_W(grid.point(a)) - full[a];
        if (vol[a] > 0.0) sol.rho.values[a] = m1[a] / vol[a];
    }
    sol.delta = std::move(phi);
    sol.disc = std::move(disc);
    return sol;
}

}  // namespace

MolecularTFSolution solve_molecule(const NuclearConfiguration& config, const GridSpec& spec,
                                   const MoleculeTolerances& tol) {
    const double N = config.electron_count();
    const double Z = config.total_charge();
    if (!(N > 0.0)) throw DomainError("solve_molecule: N must be positive");
    auto disc = std::make_shared<const MoleculeDiscretization>(config, spec);
    const FixedNu inner(*disc, tol);
    Vec phi = disc->laplacian().make_vec();
    std::vector<NuStep> history;
    int iterations = 0;
    double residual = 0.0;
    double nu = 0.0;

    auto evaluate = [&](double v) {
        const Inner r = inner.run(phi, v);
        iterations += r.iterations;
        residual = r.residual;
        std::vector<double> m1;
        disc->cell_charges(phi, v, m1);
        const auto& mref = disc->reference_charges();
        double c = disc->reference_charge();
        for (std::size_t a = 0; a < m1.size(); ++a) c += m1[a] - mref[a];
        history.push_back({v, c});
        return c;
    };

    if (N >= Z) {
        evaluate(0.0);
    } else {
        const double target = N;
        const double ctol = tol.charge_rtol * target;
        nu = chemical_potential(Z, N, double(config.spin_factor()));
        double lo = -std::numeric_limits<double>::infinity(), hi = 0.0;
        bool done = false;
        const bool use_newton = tol.method == MoleculeTolerances::Method::Newton;
        for (int k = 0; k < tol.max_nu_steps && !done; ++k) {
            const double f = evaluate(nu) - target;
            if (std::abs(f) <= ctol) {
                done = true;
                break;
            }
            if (f > 0.0) hi = nu;
            else lo = nu;
            double next;
            if (use_newton) {
                const double dn = inner.charge_derivative(phi, nu);
                next = dn > 0.0 ? nu - f / dn : std::numeric_limits<double>::quiet_NaN();
            } else {
                next = std::numeric_limits<double>::quiet_NaN();
            }
            const bool bracketed = std::isfinite(lo);
            if (bracketed) {
                if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            } else if (!(next < hi) || !std::isfinite(next)) {
                next = 2.0 * nu;
            }
            if (!use_newton && bracketed) next = 0.5 * (lo + hi);
            nu = next;
        }
        if (!done) throw ConvergenceError("molecule: chemical potential search did not converge");
    }
    MolecularTFSolution sol = assemble(disc, std::move(phi), nu, tol);
    sol.iterations = iterations;
    sol.residual = residual;
    sol.nu_history = std::move(history);
    return sol;
}

EnergyFunctionals energy_functionals(const MolecularTFSolution& sol) {
    return {sol.energy.total, sol.phi_star, sol.phi_sub, sol.duality_gap};
}

nlohmann::json MolecularTFSolution::report() const {
    nlohmann::json j;
    j["config"] = config.to_json();
    j["grid"] = grid_spec.to_json();
    j["nu"] = jnum(nu);
    j["energy"] = {{"kinetic", jnum(energy.kinetic)},
                   {"attraction", jnum(energy.attraction)},
                   {"repulsion", jnum(energy.repulsion)},
                   {"total", jnum(energy.total)},
                   {"dual", jnum(energy.dual)}};
    j["hat_energy"] = jnum(hat_energy);
    j["phi_star"] = jnum(phi_star);
    j["phi_sub"] = jnum(phi_sub);
    j["duality_gap"] = jnum(duality_gap);
    j["charge"] = jnum(charge);
    j["rho43"] = jnum(rho43);
    j["iterations"] = iterations;
    j["residual"] = jnum(residual);
    nlohmann::json h = nlohmann::json::array();
    for (const auto& s : nu_history) h.push_back({{"nu", jnum(s.nu)}, {"charge", jnum(s.charge)}});
    j["nu_history"] = h;
    return j;
}

}  // namespace tflab
