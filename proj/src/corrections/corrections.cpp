#include "tflab/corrections.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "tflab/error.hpp"
#include "tflab/json_util.hpp"
#include "tflab/molecule.hpp"

namespace tflab {
namespace {

constexpr double kPi = std::numbers::pi;

KappaVariant kappa_variant(double c_tf, double q, double rho43, double dirac) {
    KappaVariant k{};
    k.c_tf = c_tf;
    k.kappa = q * c_tf * c_tf / std::pow(2.0 * kPi, 3);
    k.value = k.kappa * rho43;
    k.ratio = dirac != 0.0 ? k.value / std::abs(dirac) : 0.0;
    return k;
}

nlohmann::json kappa_json(const KappaVariant& k) {
    return {{"c_tf", jnum(k.c_tf)}, {"kappa", jnum(k.kappa)}, {"value", jnum(k.value)},
            {"ratio_to_dirac", jnum(k.ratio)}};
}

}  // namespace

double scott(const std::vector<double>& Z, double q) {
    double s = 0.0;
    for (double z : Z) s += z * z;
    return q * s;
}

double scott(const NuclearConfiguration& config) { return scott(config.charges(), config.spin_factor()); }

DiracSchwinger dirac_schwinger(double rho43, double q) {
    if (!(rho43 >= 0.0)) throw DomainError("dirac_schwinger: int rho^{4/3} must be >= 0");
    if (!(q >= 1.0)) throw DomainError("dirac_schwinger: q must be >= 1");
    DiracSchwinger d;
    const double coef = std::pow(36.0 * kPi, 2.0 / 3.0) * std::pow(q, 2.0 / 3.0);
    d.rho43 = rho43;
    d.schwinger = coef * rho43;
    d.dirac = -4.5 * d.schwinger;
    d.kappa_q = kappa_variant(std::pow(6.0 * kPi * kPi / q, 2.0 / 3.0), q, rho43, d.dirac);
    d.kappa_q2 = kappa_variant(std::pow(6.0 * kPi * kPi / (q * q), 2.0 / 3.0), q, rho43, d.dirac);
    return d;
}

DiracSchwinger dirac_schwinger(const RadialDensity& rho, double q) {
    for (double v : rho.f)
        if (v < 0.0) throw DomainError("dirac_schwinger: negative density");
    RadialDensity p = rho;
    for (double& v : p.f) v = std::pow(v, 4.0 / 3.0);
    return dirac_schwinger(p.total(), q);
}

double remainder_R(double Z, double a, double C) {
    if (a <= 1.0 / Z) return C * Z * Z;
    const double tail = std::isfinite(a) ? std::pow(Z, 1.5) / std::sqrt(a) : 0.0;
    return C * (std::pow(Z, 5.0 / 3.0) + tail);
}

CorrectionSet assemble_energy(double e_tf, double scott_term, const DiracSchwinger& ds, double Z, double a,
                              double C) {
    CorrectionSet c;
    c.scott = scott_term;
    c.ds = ds;
    c.e_tf = e_tf;
    c.assembled = e_tf + scott_term + ds.dirac + ds.schwinger;
    c.remainder = remainder_R(Z, a, C);
    return c;
}

CorrectionSet corrections(const AtomicTFSolution& sol, double C) {
    return assemble_energy(sol.energy().total, scott({sol.Z()}, sol.q()), dirac_schwinger(sol.rho43(), sol.q()),
                           sol.Z(), std::numeric_limits<double>::infinity(), C);
}

CorrectionSet corrections(const MolecularTFSolution& sol, double C) {
    const auto& cfg = sol.config;
    return assemble_energy(sol.energy.total, scott(cfg), dirac_schwinger(sol.rho43, cfg.spin_factor()),
                           cfg.total_charge(), cfg.half_min_distance(), C);
}

nlohmann::json CorrectionSet::to_json() const {
    return {{"scott", jnum(scott)},
            {"dirac", jnum(ds.dirac)},
            {"schwinger", jnum(ds.schwinger)},
            {"rho43", jnum(ds.rho43)},
            {"kappa_dirac_variants", {{"c_tf_q", kappa_json(ds.kappa_q)}, {"c_tf_q2", kappa_json(ds.kappa_q2)}}},
            {"E_TF", jnum(e_tf)},
            {"E_assembled", jnum(assembled)},
            {"remainder_R", jnum(remainder)}};
}

}  // namespace tflab
