#pragma once

#include <vector>

#include <json.hpp>

#include "tflab/atom.hpp"
#include "tflab/config.hpp"
#include "tflab/coulomb.hpp"

namespace tflab {

struct MolecularTFSolution;

/// q sum_m Z_m^2.
double scott(const NuclearConfiguration& config);
double scott(const std::vector<double>& Z, double q);

struct KappaVariant {
    double c_tf;
    double kappa;  // (2 pi)^-3 q c_tf^2
    double value;  // kappa int rho^{4/3}
    double ratio;  // value / |dirac|
};

struct DiracSchwinger {
    double dirac = 0.0;
    double schwinger = 0.0;
    double rho43 = 0.0;
    /// c_TF = (6 pi^2 / q)^{2/3} and (6 pi^2 / q^2)^{2/3}.
    KappaVariant kappa_q{}, kappa_q2{};
};

DiracSchwinger dirac_schwinger(double rho43, double q);
/// int rho^{4/3} by the radial quadrature. Throws DomainError on a negative value.
DiracSchwinger dirac_schwinger(const RadialDensity& rho, double q);

/// Remainder scale R = C (Z^{5/3} + Z^{3/2} a^{-1/2}) for a >= 1/Z, C Z^2 below.
double remainder_R(double Z, double a, double C = 1.0);

struct CorrectionSet {
    double scott = 0.0;
    DiracSchwinger ds;
    double e_tf = 0.0;
    double assembled = 0.0;  // E^TF + Scott + Dirac + Schwinger
    double remainder = 0.0;

    nlohmann::json to_json() const;
};

CorrectionSet assemble_energy(double e_tf, double scott_term, const DiracSchwinger& ds, double Z, double a,
                              double C = 1.0);
CorrectionSet corrections(const AtomicTFSolution& sol, double C = 1.0);
CorrectionSet corrections(const MolecularTFSolution& sol, double C = 1.0);

}  // namespace tflab
