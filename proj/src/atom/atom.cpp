#include <cmath>
#include <limits>
#include <numbers>

#include "tflab/atom.hpp"
#include "tflab/error.hpp"
#include "tflab/thermo.hpp"

namespace tflab {

AtomicTFSolution::AtomicTFSolution(double Z, double N, double q, std::shared_ptr<const TFProfile> profile)
    : Z_(Z), N_(N), q_(q), b_(tf_length_scale(Z, q)), profile_(std::move(profile)) {
    constexpr double pi = std::numbers::pi;
    if (!profile_) {
        nu_ = -std::numeric_limits<double>::infinity();
        r_bar_ = 0.0;
        return;
    }
    const TFProfile& p = *profile_;
    const double n_eff = std::min(N, Z);
    if (std::isfinite(p.x_cut)) {
        r_bar_ = b_ * p.x_cut;
        nu_ = -(Z - N) / r_bar_;
    } else {
        r_bar_ = std::numeric_limits<double>::infinity();
        nu_ = 0.0;
    }
    const double zb = Z * Z / b_;
    charge_ = Z * p.I_rho;
    const double a_v = zb * p.I_v;  // int V rho
    const double a_w = zb * p.I_w;  // int (W + nu) rho
    const double d = a_v - a_w + nu_ * charge_;
    double field = 4.0 * pi * zb * p.I_field;  // |grad(W - V)|^2
    if (std::isfinite(r_bar_)) field += 4.0 * pi * N * N / r_bar_;

    energy_.kinetic = 0.6 * a_w;
    energy_.attraction = -a_v;
    energy_.repulsion = 0.5 * d;
    energy_.total = energy_.kinetic + energy_.attraction + energy_.repulsion;
    phi_sub_ = -0.4 * a_w - field / (8.0 * pi);
    phi_star_ = energy_.kinetic + energy_.attraction + energy_.repulsion - nu_ * charge_;
    energy_.dual = phi_sub_ + nu_ * n_eff;
    rho43_ = 4.0 * pi * b_ * std::pow(q / (6.0 * pi * pi), 4.0 / 3.0) * Z * Z * p.I_43;
    r0_ = 8.0 * pi * Z * b_ * p.I_chi;
    if (std::isfinite(r_bar_)) r0_ -= 4.0 * pi * nu_ * r_bar_ * r_bar_;
}

double AtomicTFSolution::W(double r) const {
    if (!(r > 0.0)) throw SingularityError("W evaluated at the nucleus");
    if (!profile_) return Z_ / r;
    if (r >= r_bar_) return (Z_ - N_) / r;
    return Z_ * profile_->chi_at(r / b_) / r - nu_;
}

double AtomicTFSolution::dW(double r) const {
    if (!(r > 0.0)) throw SingularityError("W' evaluated at the nucleus");
    if (!profile_) return -Z_ / (r * r);
    if (r >= r_bar_) return -(Z_ - N_) / (r * r);
    const double x = r / b_;
    return Z_ * (profile_->dchi_at(x) / (b_ * r) - profile_->chi_at(x) / (r * r));
}

double AtomicTFSolution::d2W(double r) const {
    if (!(r > 0.0)) throw SingularityError("W'' evaluated at the nucleus");
    if (!profile_) return 2.0 * Z_ / (r * r * r);
    if (r >= r_bar_) return 2.0 * (Z_ - N_) / (r * r * r);
    const double x = r / b_;
    return Z_ * (profile_->d2chi_at(x) / (b_ * b_ * r) - 2.0 * profile_->dchi_at(x) / (b_ * r * r) +
                 2.0 * profile_->chi_at(x) / (r * r * r));
}

double AtomicTFSolution::rho(double r) const {
    if (!profile_ || r >= r_bar_) return 0.0;
    if (!(r > 0.0)) return std::numeric_limits<double>::infinity();
    return pressure_prime(Z_ * profile_->chi_at(r / b_) / r, q_);
}

double AtomicTFSolution::hartree(double r) const {
    if (!profile_) return 0.0;
    if (r >= r_bar_) return N_ / r;
    if (!(r > 0.0)) return -Z_ * profile_->slope / b_ + nu_;
    const double x = r / b_;
    return Z_ * (1.0 - profile_->chi_at(x)) / r + nu_;
}

std::vector<double> AtomicTFSolution::radii() const {
    std::vector<double> r;
    if (!profile_) return r;
    r.reserve(profile_->x.size());
    for (double x : profile_->x) r.push_back(b_ * x);
    return r;
}

AtomicTFSolution solve_atom(double Z, double N, double q, const ShootingTolerances& tol) {
    if (!(Z > 0.0) || !std::isfinite(Z)) throw DomainError("solve_atom: Z must be positive");
    if (!(N >= 0.0) || !std::isfinite(N)) throw DomainError("solve_atom: N must be >= 0");
    if (!(q >= 1.0) || q != std::floor(q)) throw DomainError("solve_atom: q must be a positive integer");
    if (N == 0.0) return AtomicTFSolution(Z, N, q, nullptr);
    if (N >= Z) return AtomicTFSolution(Z, N, q, neutral_profile());
    return AtomicTFSolution(Z, N, q, ion_profile((Z - N) / Z, tol));
}

double chemical_potential(double Z, double N, double q) {
    if (!(N > 0.0)) throw DomainError("chemical_potential: N must be positive");
    return solve_atom(Z, N, q).nu();
}

AtomicTFSolution rescale_solution(const AtomicTFSolution& sol, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("rescale_solution: lambda must be positive");
    if (lambda == 1.0) return sol;
    return AtomicTFSolution(sol.Z() * lambda, sol.N() * lambda, sol.q(), sol.profile_ptr());
}

}  // namespace tflab
