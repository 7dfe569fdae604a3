#include "tflab/thermo.hpp"

#include "tflab/error.hpp"

namespace tflab {

double kinetic_density(double rho, double q) {
    if (rho < 0.0 || std::isnan(rho)) throw DomainError("kinetic_density: negative density");
    if (rho == 0.0) return 0.0;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return 0.6 * std::cbrt(std::pow(6.0 * pi2 / q, 2.0)) * std::pow(rho, 5.0 / 3.0);
}

double depth_for_density(double rho, double q) {
    if (rho < 0.0 || std::isnan(rho)) throw DomainError("depth_for_density: negative density");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return std::cbrt(std::pow(6.0 * pi2 * rho / q, 2.0));
}

}  // namespace tflab
