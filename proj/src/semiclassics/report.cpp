#include <algorithm>
#include <cmath>
#include <limits>

#include "tflab/corrections.hpp"
#include "tflab/error.hpp"
#include "tflab/json_util.hpp"
#include "tflab/semiclassics.hpp"

namespace tflab {

SpectrumOptions atomic_spectrum_options(const AtomicTFSolution& sol, double h_factor) {
    SpectrumOptions opt;
    const double Z = sol.Z();
    const double rb = std::isfinite(sol.r_bar()) ? sol.r_bar() : 0.0;
    opt.r_max = std::max(4.0 * rb, 40.0 * std::pow(Z, -1.0 / 3.0));
    opt.h = h_factor / Z;
    opt.coulomb_charge = Z;
    return opt;
}

SpectralReport spectral_report(const AtomicTFSolution& sol, const SpectrumOptions& opt, double C) {
    SpectralReport rep;
    rep.Z = sol.Z();
    rep.N = sol.N();
    rep.q = sol.q();
    rep.nu = sol.nu();
    rep.scott = scott({rep.Z}, rep.q);
    rep.lambda_bound = C * std::pow(rep.Z, 8.0 / 9.0) +
                       C * std::cbrt(std::max(rep.Z - rep.N, 0.0)) * std::pow(rep.Z, 2.0 / 3.0);
    if (sol.empty()) return rep;

    rep.spectrum = radial_spectrum([&](double r) { return sol.W(r); }, rep.q, opt);
    const SpectralSummary& s = rep.spectrum;
    const WeylTerms weyl = weyl_terms(sol, rep.nu);
    rep.weyl_trace = weyl.trace;
    rep.weyl_count = weyl.count;
    rep.n1 = s.trace(rep.nu);
    rep.count = s.count(rep.nu);
    rep.ratio = (rep.n1 - rep.weyl_trace) / rep.scott;
    rep.ratio_standard = (rep.n1 - rep.weyl_trace) / (rep.scott / 8.0);
    rep.lambda_N = s.lambda_N(rep.N);
    rep.lambda_gap = std::abs(rep.lambda_N - rep.nu);
    rep.upper_bound = rep.n1 + rep.nu * rep.N + rep.lambda_gap * std::abs(rep.count - rep.N);
    const DiracSchwinger ds = dirac_schwinger(sol.rho43(), rep.q);
    const double base = s.lowest_sum(rep.N) - sol.energy().repulsion;  // D/2 = repulsion
    rep.e_ds_q = base - ds.kappa_q.value;
    rep.e_ds_q2 = base - ds.kappa_q2.value;
    rep.l_max = int(s.eigenvalues.size()) - 1;
    for (std::size_t l = 0; l < s.eigenvalues.size(); ++l) rep.states += s.eigenvalues[l].size();
    return rep;
}

SpectralReport spectral_report(const AtomicTFSolution& sol, double C) {
    return spectral_report(sol, atomic_spectrum_options(sol), C);
}

nlohmann::json SpectralReport::to_json() const {
    return {{"Z", jnum(Z)},
            {"N", jnum(N)},
            {"q", jnum(q)},
            {"nu", jnum(nu)},
            {"n1", jnum(n1)},
            {"weyl_trace", jnum(weyl_trace)},
            {"weyl_count", jnum(weyl_count)},
            {"count", jnum(count)},
            {"scott", jnum(scott)},
            {"ratio", jnum(ratio)},
            {"ratio_hydrogenic_scott", jnum(ratio_standard)},
            {"lambda_N", jnum(lambda_N)},
            {"lambda_gap", jnum(lambda_gap)},
            {"lambda_bound", jnum(lambda_bound)},
            {"upper_bound", jnum(upper_bound)},
            {"E_DS", {{"c_tf_q", jnum(e_ds_q)}, {"c_tf_q2", jnum(e_ds_q2)}}},
            {"l_max", l_max},
            {"states", states},
            {"h", jnum(spectrum.h)},
            {"r_max", jnum(spectrum.r_max)}};
}

double zeta_bar(double ell, double Z, double N) {
    const double core = std::pow(Z, -1.0 / 3.0);
    const double d = std::abs(Z - N);
    const double outer = d > 0.0 ? std::pow(d, -1.0 / 3.0) : std::numeric_limits<double>::infinity();
    if (ell <= core) return std::sqrt(Z / ell);
    if (ell <= outer) return 1.0 / (ell * ell);
    return std::sqrt(d / ell);
}

RemainderScales remainder_scales(const AtomicTFSolution& sol, double a, double C) {
    if (sol.N() > sol.Z()) throw DomainError("remainder_scales: needs N <= Z");
    RemainderScales out;
    out.R = remainder_R(sol.Z(), a, C);
    if (sol.empty()) return out;
    out.R0 = sol.r0_integral();
    out.R0_scaled = out.R0 / std::pow(sol.Z(), 2.0 / 3.0);
    for (double r : sol.radii()) {
        const double w = sol.W(r);
        const double ell = 0.5 * r;
        const double zb = zeta_bar(ell, sol.Z(), sol.N());
        const double z = std::sqrt(std::max(w, 0.0));
        out.r.push_back(r);
        out.ell.push_back(ell);
        out.zeta.push_back(z);
        out.zeta_bar.push_back(zb);
        out.zeta_ratio_max = std::max(out.zeta_ratio_max, z / zb);
    }
    return out;
}

nlohmann::json RemainderScales::to_json() const {
    return {{"R", jnum(R)}, {"R0", jnum(R0)}, {"R0_over_Z23", jnum(R0_scaled)},
            {"zeta_ratio_max", jnum(zeta_ratio_max)}, {"samples", r.size()}};
}

}  // namespace tflab
