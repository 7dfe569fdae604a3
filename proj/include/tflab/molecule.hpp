#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tflab/atom.hpp"
#include "tflab/config.hpp"
#include "tflab/grid.hpp"
#include "tflab/laplacian.hpp"

namespace tflab {

struct GridSpec {
    std::array<std::size_t, 3> dims{64, 64, 64};
    /// Explicit bounds per axis; used when auto_box is false.
    std::array<std::array<double, 2>, 3> box{};
    bool auto_box = true;
    /// Node spacing at each nucleus in units of that atom's TF length b.
    double focus_spacing = 0.04;
    /// Uniform axes instead of graded ones.
    bool uniform = false;
    /// Neutral atoms lose about 576 / x^3 of their charge beyond x TF lengths; the auto box
    /// keeps this below tail_loss.
    double tail_loss = 1e-4;

    nlohmann::json to_json() const;
    static GridSpec from_json(const nlohmann::json& j);
};

struct MoleculeTolerances {
    enum class Method { Newton, Picard };
    Method method = Method::Newton;
    double energy_rtol = 1e-11;
    /// Bound on poisson_residual relative to the electron number.
    double residual = 1e-6;
    /// Relative electron-number tolerance of the nu search.
    double charge_rtol = 1e-9;
    double cg_rtol = 1e-11;
    int max_iterations = 200;
    int max_nu_steps = 80;
    /// Picard damping start value.
    double damping = 0.5;
    /// Charge fraction allowed in the outermost interior layer before the box counts as too small.
    double boundary_mass = 1e-3;

    nlohmann::json to_json() const;
    static MoleculeTolerances from_json(const nlohmann::json& j);
};

struct NuStep {
    double nu;
    double charge;
};

/// Grid problem for the correction delta = phi - phi_ref, where phi_ref is the superposition of
/// radial atomic Hartree potentials (electrons split in proportion to Z_m). W_ref = V - phi_ref is
/// known exactly at every quadrature point, so the grid carries only the interaction part.
///
/// Cells near nuclei carry sub-quadratures (apex-graded pyramids); the remaining cells use their
/// node value. Within a cell delta is its node value. Every integral is the exact radial value of
/// the atomic self terms plus the cell quadrature of the remainder.
class MoleculeDiscretization {
public:
    MoleculeDiscretization(const NuclearConfiguration& config, const GridSpec& spec);

    const NuclearConfiguration& config() const { return config_; }
    const GridSpec& spec() const { return spec_; }
    const Grid3D& grid() const { return *grid_; }
    std::shared_ptr<const Grid3D> grid_ptr() const { return grid_; }
    const GridLaplacian& laplacian() const { return *lap_; }
    const std::vector<AtomicTFSolution>& reference_atoms() const { return atoms_; }
    /// W_ref at interior nodes (0 on the boundary and at special nodes).
    const std::vector<double>& reference_depth() const { return wref_node_; }
    /// Cell integrals of rho_ref.
    const std::vector<double>& reference_charges() const { return m_ref_; }
    double reference_charge() const { return ref_.charge; }
    std::size_t special_cells() const { return special_nodes_.size(); }
    double q() const { return double(config_.spin_factor()); }
    /// W_ref and phi_ref at an arbitrary point.
    double reference_W(const Vec3& x) const;
    double reference_phi(const Vec3& x) const;

    struct Sums {
        double charge = 0.0;
        double pressure = 0.0;    // int P(W + nu)
        double attraction = 0.0;  // int V rho
        double kinetic = 0.0;     // int tau(rho)
        double rho43 = 0.0;       // int rho^{4/3}
        double coulomb = 0.0;     // D(rho, rho) - D(rho - rho_ref, same)
        double coulomb_ref = 0.0; // D(rho_ref, rho_ref)
        double boundary_layer = 0.0;
    };

    /// Cell charges m'_a = int_cell P'(W_ref - delta_a + nu) and optionally m''_a = int_cell P''.
    void cell_charges(const GridLaplacian::Vec& delta, double nu, std::vector<double>& m1,
                      std::vector<double>* m2 = nullptr) const;
    /// int P(W_ref - delta + nu) by cell quadrature.
    double pressure_integral(const GridLaplacian::Vec& delta, double nu) const;
    /// Integrals with rho = scale * P'(W_ref - delta + nu).
    Sums sums(const GridLaplacian::Vec& delta, double nu, double scale = 1.0) const;
    /// Cell integrals of an arbitrary density f(x).
    template <class F>
    std::vector<double> cell_integrals(F&& f) const {
        std::vector<double> out(grid_->size(), 0.0);
        const auto& vol = grid_->volumes();
        for (std::size_t a = 0; a < out.size(); ++a)
            if (vol[a] > 0.0 && special_[a] < 0) out[a] = vol[a] * f(grid_->point(a));
        for (std::size_t s = 0; s < special_nodes_.size(); ++s) {
            double acc = 0.0;
            for (std::size_t k = offsets_[s]; k < offsets_[s + 1]; ++k) acc += qw_[k] * f(qx_[k]);
            out[special_nodes_[s]] = acc;
        }
        return out;
    }

    /// Per cell int rho f with rho = P'(W_ref - delta + nu).
    std::vector<double> weighted_charges(const GridLaplacian::Vec& delta, double nu,
                                         const std::function<double(const Vec3&)>& f) const;

    /// Phi_*(W + nu) = -int P(W + nu) - (1/8 pi) |grad (V - W)|^2 with W = W_ref - delta.
    double phi_sub(const GridLaplacian::Vec& delta, double nu) const;
    /// Phi^*(rho, nu) = int (tau(rho) - V rho) + D(rho, rho)/2 - nu int rho, rho = scale * P'(W + nu).
    double phi_star(const GridLaplacian::Vec& delta, double nu, double scale = 1.0) const;
    /// D(f, g) for cell charges via one Poisson solve.
    double coulomb(const std::vector<double>& mf, const std::vector<double>& mg) const;
    /// Potential 4 pi K^{-1} m of cell charges.
    GridLaplacian::Vec hartree(const std::vector<double>& m) const;

private:
    struct Reference {
        double charge = 0.0, kinetic = 0.0, pressure = 0.0, attraction = 0.0, coulomb = 0.0, rho43 = 0.0;
    };

    NuclearConfiguration config_;
    GridSpec spec_;
    std::shared_ptr<const Grid3D> grid_;
    std::unique_ptr<GridLaplacian> lap_;
    std::vector<AtomicTFSolution> atoms_;
    Reference ref_;  // sums of the exact radial self terms
    std::vector<double> wref_node_;
    std::vector<double> m_ref_;
    std::vector<double> p_weight_;  // vol q / (15 pi^2) at regular nodes, 0 elsewhere
    std::vector<int> special_;  // index into special_nodes_ or -1
    std::vector<std::size_t> special_nodes_;
    std::vector<std::size_t> offsets_;
    std::vector<Vec3> qx_;
    std::vector<double> qw_, qwref_;
    std::vector<std::size_t> boundary_layer_;
};

/// Axis-aligned box and graded axes used for a configuration.
std::shared_ptr<const Grid3D> build_grid(const NuclearConfiguration& config, const GridSpec& spec);

struct MolecularTFSolution {
    NuclearConfiguration config;
    GridSpec grid_spec;
    ScalarField3D W;
    ScalarField3D rho;  // cell averages
    double nu = 0.0;
    EnergyBreakdown energy;
    double hat_energy = 0.0;  // E^TF + U
    double phi_star = 0.0;
    double phi_sub = 0.0;
    double duality_gap = 0.0;
    double charge = 0.0;
    double rho43 = 0.0;
    int iterations = 0;
    double residual = 0.0;
    std::vector<NuStep> nu_history;
    /// Grid correction to the superposed atomic Hartree potentials and its monopole coefficient.
    GridLaplacian::Vec delta;
    std::shared_ptr<const MoleculeDiscretization> disc;

    nlohmann::json report() const;
};

MolecularTFSolution solve_molecule(const NuclearConfiguration& config, const GridSpec& spec = {},
                                   const MoleculeTolerances& tol = {});

struct EnergyFunctionals {
    double energy;  // E(rho)
    double phi_star;
    double phi_sub;
    double duality_gap;
};

EnergyFunctionals energy_functionals(const MolecularTFSolution& sol);

struct ExcessEnergy {
    double excess = 0.0;  // hat E^TF(molecule) - min sum_m E^TF(Z_m; N_m)
    double molecule_hat_energy = 0.0;
    double atoms_energy = 0.0;
    std::vector<double> allocation;
    double common_nu = 0.0;
    double d_distance = 0.0;  // D(rho - sum rho_m, same)
    double d_ratio = 0.0;     // d_distance / excess
};

/// Split of N over atoms minimizing sum E^TF(Z_m; N_m): equal chemical potentials (or all neutral).
std::vector<double> optimal_allocation(const std::vector<double>& Z, double N, double q, double* common_nu = nullptr);

ExcessEnergy excess_energy(const NuclearConfiguration& config, const GridSpec& spec = {},
                           const MoleculeTolerances& tol = {});
ExcessEnergy excess_energy(const MolecularTFSolution& sol);

struct BindingPoint {
    double separation;
    double energy;
    double hat_energy;
};

/// Diatomic along the x axis (nuclei at -a/2 and a/2).
std::vector<BindingPoint> binding_curve(const std::vector<double>& Z, double N, int q,
                                        const std::vector<double>& separations, const GridSpec& spec = {},
                                        const MoleculeTolerances& tol = {});

struct ScalingCheck {
    double lhs;  // lambda^7 hat E(Z; lambda y; N)
    double rhs;  // hat E(lambda^3 Z; y; lambda^3 N)
    double relative_residual;
};
ScalingCheck binding_scaling_check(const NuclearConfiguration& config, double lambda, const GridSpec& spec = {},
                                   const MoleculeTolerances& tol = {});

struct InterclusterEnergy {
    double total = 0.0;
    std::vector<std::vector<double>> pairs;  // J_kl
    double reference = 0.0;                  // (Z - N)^2 / a
    double ratio = 0.0;                      // total / reference
};

/// Smooth partition theta_k(x) at grid nodes: softmin of the distance to each cluster of nuclei
/// (cluster[m] is the cluster of nucleus m). width 0 picks a quarter of the smallest separation.
std::vector<std::vector<double>> cluster_weights(const MolecularTFSolution& sol, const std::vector<int>& cluster,
                                                 double width = 0.0);
/// J_kl = D(rho theta_k, rho theta_l) - int rho theta_l V_k - int rho theta_k V_l + U_kl, summed over k < l.
/// weights[k] are node values and must sum to 1 at every interior node.
InterclusterEnergy intercluster_energy(const MolecularTFSolution& sol, const std::vector<int>& cluster,
                                       const std::vector<std::vector<double>>& weights);
InterclusterEnergy intercluster_energy(const MolecularTFSolution& sol, const std::vector<int>& cluster);

struct SandwichBounds {
    double epsilon;
    double C;
    bool holds;
    std::size_t samples;
};
/// Smallest C (with epsilon = 1/C) such that
///   sum_m eps W_m(C (x - y_m)) <= W(x) <= C sum_m W_m(eps (x - y_m))
/// at every interior node within 20 TF lengths of a nucleus, W_m the atoms sharing the molecular
/// chemical potential.
SandwichBounds superposition_sandwich(const MolecularTFSolution& sol);

}  // namespace tflab
