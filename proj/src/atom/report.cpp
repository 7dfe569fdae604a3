#include <cmath>
#include <limits>
#include <sstream>

#include "tflab/atom.hpp"
#include "tflab/json_util.hpp"

namespace tflab {

nlohmann::json atom_report(const AtomicTFSolution& sol) {
    const auto& e = sol.energy();
    const double d = sol.Z() - sol.N();
    nlohmann::json j;
    j["Z"] = jnum(sol.Z());
    j["N"] = jnum(sol.N());
    j["q"] = jnum(sol.q());
    j["nu"] = jnum(sol.nu());
    j["r_bar"] = jnum(sol.r_bar());
    j["r_bar_estimate"] = jnum(d > 0.0 ? std::pow(d, -1.0 / 3.0) : std::numeric_limits<double>::infinity());
    j["chi_slope"] = jnum(sol.chi_slope());
    j["length_scale"] = jnum(sol.length_scale());
    j["charge"] = jnum(sol.charge());
    j["energy"] = {{"kinetic", jnum(e.kinetic)},
                   {"attraction", jnum(e.attraction)},
                   {"repulsion", jnum(e.repulsion)},
                   {"total", jnum(e.total)},
                   {"dual", jnum(e.dual)}};
    j["phi_star"] = jnum(sol.phi_star());
    j["phi_sub"] = jnum(sol.phi_sub());
    j["duality_gap"] = jnum(sol.duality_gap());
    j["rho43"] = jnum(sol.rho43());
    return j;
}

std::string atom_profile_csv(const AtomicTFSolution& sol) {
    std::ostringstream os;
    os.precision(12);
    os << "r,W,rho\n";
    for (double r : sol.radii()) os << r << ',' << sol.W(r) << ',' << sol.rho(r) << '\n';
    return os.str();
}

}  // namespace tflab
