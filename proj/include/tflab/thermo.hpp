#pragma once

#include <cmath>
#include <numbers>

namespace tflab {

/// Units used throughout: hbar = 1, electron mass 1/2, elementary charge 1.
/// The one-particle kinetic operator is therefore -Laplacian with no 1/2.
struct UnitConvention {
    static constexpr double hbar = 1.0;
    static constexpr double electron_mass = 0.5;
    static constexpr double charge = 1.0;
};

struct PressurePair {
    double P;
    double dP;
};

inline double positive_part(double w) { return w > 0.0 ? w : 0.0; }

/// P(w) = q w_+^{5/2} / (15 pi^2) and its derivative, the TF density at depth w.
inline PressurePair pressure_pair(double w, double q) {
    if (!(w > 0.0)) return {0.0, 0.0};
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double s = std::sqrt(w);
    const double w32 = w * s;
    return {q * w32 * w / (15.0 * pi2), q * w32 / (6.0 * pi2)};
}

inline double pressure(double w, double q) { return pressure_pair(w, q).P; }
inline double pressure_prime(double w, double q) { return pressure_pair(w, q).dP; }

inline double pressure_second(double w, double q) {
    if (!(w > 0.0)) return 0.0;
    return q * std::sqrt(w) / (4.0 * std::numbers::pi * std::numbers::pi);
}

/// tau(rho) = (3/5) (6 pi^2 / q)^{2/3} rho^{5/3}. Throws DomainError for rho < 0.
double kinetic_density(double rho, double q);

/// Inverse of P': the depth w >= 0 with P'(w) = rho.
double depth_for_density(double rho, double q);

/// tau(P'(w)) evaluated through the Legendre identity w P' - P, exact for w <= 0 too.
inline double kinetic_at_depth(double w, double q) {
    const PressurePair p = pressure_pair(w, q);
    return w > 0.0 ? w * p.dP - p.P : 0.0;
}

}  // namespace tflab
