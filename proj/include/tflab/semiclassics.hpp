#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tflab/atom.hpp"

namespace tflab {

struct MolecularTFSolution;

using RadialFunction = std::function<double(double)>;

struct WeylTerms {
    double count = 0.0;  // int P'(W + nu)
    double trace = 0.0;  // -int P(W + nu)
};

/// Weyl count and trace of a spherically symmetric W. scale is a typical length of W (it sets
/// the log-radius integration range); breaks are radii where W + nu has a kink.
/// Throws DivergenceError when W + nu stays positive at large r.
WeylTerms weyl_terms(const RadialFunction& W, double nu, double q, double scale = 1.0,
                     const std::vector<double>& breaks = {});
WeylTerms weyl_terms(const AtomicTFSolution& sol, double nu);
WeylTerms weyl_terms(const MolecularTFSolution& sol);

struct SpectrumOptions {
    double h = 1e-3;      // radial step
    double r_max = 40.0;
    int l_max = -1;       // -1: smallest l whose effective potential is nonnegative
    double window = 0.0;  // eigenvalues below this are kept
    /// Coulomb charge left out of the mollification (W - Z/r is mollified).
    double coulomb_charge = 0.0;
    /// Mollifier width h^(1 - delta); delta <= 0 switches mollification off.
    double mollify_delta = 0.1;
};

struct SpectralSummary {
    double q = 1.0;
    std::vector<std::vector<double>> eigenvalues;  // [l][k], increasing
    double h = 0.0, r_max = 0.0;

    double degeneracy(std::size_t l) const { return q * double(2 * l + 1); }
    /// #{eigenvalues < lambda} with multiplicity.
    double count(double lambda) const;
    /// sum (lambda_j - lambda)_- with multiplicity (nonpositive).
    double trace(double lambda) const;
    /// N-th eigenvalue with multiplicity (ceil for fractional N); 0 when fewer states are bound.
    double lambda_N(double N) const;
    /// Sum of the lowest N negative eigenvalues, the last shell weighted fractionally.
    double lowest_sum(double N) const;
    /// (l, k, lambda) in CSV form.
    std::string csv() const;
};

/// Finite-difference eigenvalues of -u'' + l(l+1)/r^2 u - W u = lambda u on (0, r_max) with
/// Dirichlet ends, for every l below the truncation. Throws DomainError when a given l_max is
/// too small (the l_max channel still has an eigenvalue below the window).
SpectralSummary radial_spectrum(const RadialFunction& W, double q, const SpectrumOptions& opt = {});

/// Options for the atomic spectrum: r_max = max(4 r_bar, 40 Z^{-1/3}) and h = factor / Z.
SpectrumOptions atomic_spectrum_options(const AtomicTFSolution& sol, double h_factor = 0.04);

struct SpectralReport {
    double Z = 0.0, N = 0.0, q = 1.0, nu = 0.0;
    double n1 = 0.0;          // Tr(H_W - nu)_-
    double weyl_trace = 0.0;  // -int P(W + nu)
    double weyl_count = 0.0;
    double count = 0.0;       // N(H_W - nu)
    double scott = 0.0;
    double ratio = 0.0;       // (n1 - weyl_trace) / scott
    double ratio_standard = 0.0;  // same with the hydrogenic q Z^2 / 8
    double lambda_N = 0.0;
    double upper_bound = 0.0;  // n1 + nu N + |lambda_N - nu| |count - N|
    double e_ds_q = 0.0, e_ds_q2 = 0.0;  // E_DS with either c_TF
    double lambda_gap = 0.0;   // |lambda_N - nu|
    double lambda_bound = 0.0; // C Z^{8/9} + C (Z - N)_+^{1/3} Z^{2/3}
    int l_max = 0;
    std::size_t states = 0;
    SpectralSummary spectrum;

    nlohmann::json to_json() const;
};

SpectralReport spectral_report(const AtomicTFSolution& sol, const SpectrumOptions& opt, double C = 1.0);
SpectralReport spectral_report(const AtomicTFSolution& sol, double C = 1.0);

/// zeta_bar of the three-regime bound with C = 1.
double zeta_bar(double ell, double Z, double N);

struct RemainderScales {
    std::vector<double> r, ell, zeta, zeta_bar;
    double zeta_ratio_max = 0.0;  // max zeta / zeta_bar
    double R = 0.0;
    double R0 = 0.0;
    double R0_scaled = 0.0;  // R0 / Z^{2/3}

    nlohmann::json to_json() const;
};

/// Scales for an atom (ell = r/2). a enters R only.
RemainderScales remainder_scales(const AtomicTFSolution& sol, double a, double C = 1.0);

}  // namespace tflab
