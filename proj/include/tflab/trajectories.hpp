#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "tflab/atom.hpp"

namespace tflab {

/// Spherically symmetric W(r) with its first two derivatives on (r_min, r_max).
class CentralPotential {
public:
    static CentralPotential coulomb(double Z);
    /// Cubic B-spline of r W(r) in u = ln r. Radii must be log-uniform.
    static CentralPotential from_samples(const std::vector<double>& r, const std::vector<double>& W);
    /// Spline through samples of the atomic W on [1e-6 b, 1e4 b].
    static CentralPotential from_atom(const AtomicTFSolution& sol, std::size_t samples = 6000);

    double W(double r) const;
    double dW(double r) const;
    double d2W(double r) const;
    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }
    const std::string& name() const { return name_; }

private:
    struct Spline;
    std::string name_;
    double r_min_ = 0.0, r_max_ = 0.0;
    double coulomb_ = 0.0;
    std::shared_ptr<const Spline> spline_;
    void check(double r) const;
};

struct ConvexityReport {
    bool decreasing = true;  // W' < 0
    bool subharmonic = true; // (r^2 W')' > 0
    double max_dW = 0.0;     // largest W' seen
    double min_laplace = 0.0;  // smallest (r^2 W')' / r^2 seen
    std::size_t samples = 0;
};

/// Checks on n log-spaced radii in [r_lo, r_hi].
ConvexityReport convexity(const CentralPotential& pot, double r_lo, double r_hi, std::size_t n = 2000);

struct RotationOptions {
    /// Radicand 2 (W + nu) - M^2 / r^2 instead of W + nu - M^2 / r^2.
    bool paper_factor2 = false;
    bool integrate = true;
    int half_orbits = 6;
    int steps_per_period = 4000;
    /// Step budget; very eccentric orbits get a coarser step than the pericentre asks for.
    std::size_t max_steps = 4000000;
};

struct RotationResult {
    double M = 0.0, nu = 0.0;
    double r1 = 0.0, r2 = 0.0;
    double phi_quad = 0.0;
    double phi_orbit = 0.0;  // NaN when not integrated
    double radial_period = 0.0;
    double energy_drift = 0.0;
    bool is_circular = false;
    nlohmann::json to_json() const;
};

struct CircularOrbit {
    double r0 = 0.0;
    double M = 0.0;     // sqrt(-r0^3 W'(r0) / 2), times sqrt 2 with the factor-2 radicand
    double phi0 = 0.0;  // pi sqrt(W' / (3 W' + r W''))
    bool exceeds_pi = false;
    nlohmann::json to_json() const;
};

/// Critical point of r^2 (W + nu): 2 (W + nu) + r W' = 0.
CircularOrbit circular_orbit(const CentralPotential& pot, double nu, bool paper_factor2 = false);

RotationResult rotation_number(const CentralPotential& pot, double M, double nu, const RotationOptions& opt = {});

struct OrbitState {
    std::array<double, 2> x{};
    std::array<double, 2> p{};
};

struct OrbitSample {
    double t;
    OrbitState s;
};

struct OrbitResult {
    std::vector<OrbitSample> samples;
    std::vector<double> apsis_times, apsis_angles, apsis_radii;
    std::vector<double> half_angles;  // polar increments between successive apsides
    double mean_half_angle = 0.0;
    double energy = 0.0;
    double energy_drift = 0.0;  // max |H(t) - H(0)| / max(|H(0)|, 1e-300)
    std::size_t steps = 0;

    std::string csv() const;
};

/// Fourth-order symplectic (Yoshida composition of Stormer-Verlet) flow of H = |p|^2 - W(|x|).
/// shell is the expected H of the initial state (checked to 1e-10 relative). A sample is kept
/// every sample_every steps (0: none).
OrbitResult integrate_orbit(const CentralPotential& pot, const OrbitState& init, double shell, double t_span, double dt,
                            std::size_t sample_every = 0);

std::string rotation_csv(const std::vector<RotationResult>& rows);

}  // namespace tflab
