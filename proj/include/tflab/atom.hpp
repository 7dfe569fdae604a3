#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace tflab {

/// Dimensionless TF profile chi(x) solving chi'' = chi^{3/2} / sqrt(x), chi(0) = 1.
/// Neutral: chi -> 0 at infinity. Ion with ratio g = (Z-N)/Z: chi(x0) = 0, -x0 chi'(x0) = g.
struct TFProfile {
    double ion_ratio = 0.0;
    double slope = 0.0;
    double x_cut = std::numeric_limits<double>::infinity();
    double tail_coefficient = 0.0;  // neutral only: chi ~ 144/x^3 (1 - c x^-lambda)
    double x_match = 0.0;

    std::vector<double> x, chi, dchi;  // log-spaced samples, Hermite-interpolated

    // Integrals over the support (0, x_cut), tails included analytically.
    double I_rho = 0.0;    // int sqrt(x) chi^{3/2}
    double I_v = 0.0;      // int chi^{3/2} / sqrt(x)
    double I_w = 0.0;      // int chi^{5/2} / sqrt(x)
    double I_field = 0.0;  // int (chi' + (1 - chi)/x)^2
    double I_chi = 0.0;    // int chi
    double I_43 = 0.0;     // int chi^2

    double chi_at(double xx) const;
    double dchi_at(double xx) const;
    double d2chi_at(double xx) const;
};

struct ShootingTolerances {
    double rtol = 1e-13;
    double atol = 1e-16;
};

/// Sommerfeld exponent lambda = (sqrt(73) - 7) / 2.
double sommerfeld_exponent();

std::shared_ptr<const TFProfile> neutral_profile();
std::shared_ptr<const TFProfile> ion_profile(double ion_ratio, const ShootingTolerances& tol = {});

/// b(q, Z) = (3 pi / (2 q))^{2/3} Z^{-1/3}.
double tf_length_scale(double Z, double q);

struct EnergyBreakdown {
    double kinetic = 0.0;
    double attraction = 0.0;
    double repulsion = 0.0;
    double total = 0.0;
    double dual = 0.0;
};

class AtomicTFSolution {
public:
    AtomicTFSolution() = default;
    AtomicTFSolution(double Z, double N, double q, std::shared_ptr<const TFProfile> profile);

    double Z() const { return Z_; }
    double N() const { return N_; }
    double q() const { return q_; }
    double nu() const { return nu_; }
    double r_bar() const { return r_bar_; }
    double chi_slope() const { return profile_ ? profile_->slope : 0.0; }
    double length_scale() const { return b_; }
    bool neutral() const { return N_ >= Z_; }
    bool empty() const { return !profile_; }
    const TFProfile& profile() const { return *profile_; }
    std::shared_ptr<const TFProfile> profile_ptr() const { return profile_; }

    const EnergyBreakdown& energy() const { return energy_; }
    double phi_sub() const { return phi_sub_; }
    double phi_star() const { return phi_star_; }
    double duality_gap() const { return phi_star_ - phi_sub_; }
    /// Electron number by quadrature of rho.
    double charge() const { return charge_; }
    double rho43() const { return rho43_; }
    /// R0 = int over {W + nu > 0} of W / (|x|/2).
    double r0_integral() const { return r0_; }

    double W(double r) const;
    double dW(double r) const;
    double d2W(double r) const;
    double rho(double r) const;
    /// Hartree potential |x|^-1 * rho.
    double hartree(double r) const;
    /// rho at depth w: P'(W + nu).
    double effective_depth(double r) const { return W(r) + nu_; }

    /// Samples on the profile's log grid: r_i, W(r_i), rho(r_i).
    std::vector<double> radii() const;

private:
    double Z_ = 0.0, N_ = 0.0, q_ = 1.0;
    double nu_ = 0.0, r_bar_ = 0.0, b_ = 0.0;
    std::shared_ptr<const TFProfile> profile_;
    EnergyBreakdown energy_;
    double phi_sub_ = 0.0, phi_star_ = 0.0, charge_ = 0.0, rho43_ = 0.0, r0_ = 0.0;
};

/// Single-nucleus TF problem. N >= Z returns the neutral solution with nu = 0.
AtomicTFSolution solve_atom(double Z, double N, double q, const ShootingTolerances& tol = {});

/// nu(Z, N, q); N <= 0 is rejected.
double chemical_potential(double Z, double N, double q);

/// Solution for (lambda Z, lambda N, q) by rescaling only.
AtomicTFSolution rescale_solution(const AtomicTFSolution& sol, double lambda);

/// JSON summary {Z, N, q, nu, r_bar, chi_slope, energy, ...}. r_bar_estimate is (Z - N)^{-1/3}.
nlohmann::json atom_report(const AtomicTFSolution& sol);
/// Profile CSV with header r,W,rho on the solution's radial samples.
std::string atom_profile_csv(const AtomicTFSolution& sol);

}  // namespace tflab
