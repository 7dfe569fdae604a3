#include "tflab/bounds.hpp"

#include <cmath>
#include <limits>

#include "tflab/atom.hpp"
#include "tflab/error.hpp"
#include "tflab/json_util.hpp"

namespace tflab {

void BoundConstants::validate() const {
    for (double v : {C, C0, C1, C2, eps0})
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("bound constants must be positive");
    for (double v : {delta, delta1, delta_free})
        if (!(v >= 0.0 && v < 1.0)) throw DomainError("bound exponents delta must lie in [0, 1)");
}

void BoundConstants::set(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw DomainError("--const expects NAME=VALUE, got " + assignment);
    const std::string name = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    if (name == "n_branch" || name == "refined_q") {
        bool v;
        if (text == "1" || text == "true") v = true;
        else if (text == "0" || text == "false") v = false;
        else throw DomainError("--const " + name + " expects true/false");
        (name == "n_branch" ? n_branch : refined_q) = v;
        return;
    }
    double v;
    try {
        std::size_t used = 0;
        v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
        throw DomainError("--const " + name + ": not a number: " + text);
    }
    if (name == "C") C = v;
    else if (name == "C0") C0 = v;
    else if (name == "C1") C1 = v;
    else if (name == "C2") C2 = v;
    else if (name == "eps0") eps0 = v;
    else if (name == "delta") delta = v;
    else if (name == "delta1") delta1 = v;
    else if (name == "delta_free") delta_free = v;
    else throw DomainError("unknown constant " + name);
}

nlohmann::json BoundConstants::to_json() const {
    return {{"C", jnum(C)},           {"C0", jnum(C0)},         {"C1", jnum(C1)},
            {"C2", jnum(C2)},         {"eps0", jnum(eps0)},     {"delta", jnum(delta)},
            {"delta1", jnum(delta1)}, {"delta_free", jnum(delta_free)},
            {"n_branch", n_branch},   {"refined_q", refined_q},
            {"note", "constants are not fixed by theory; defaults make the formulas inspectable"}};
}

double branch_factor(double Z, double N, double a, const BoundConstants& k, bool use_N) {
    if (a <= std::pow(Z, -1.0 / 3.0)) return 1.0;
    const double head = std::pow(use_N ? N : Z, -k.delta);
    const double tail = std::isfinite(a) ? std::pow(a * std::cbrt(Z), -k.delta) : 0.0;
    return head + tail;
}

double excess_scale_Q(double Z, double N, double a, const BoundConstants& k) {
    return std::pow(Z, 5.0 / 3.0) * branch_factor(Z, N, a, k, k.n_branch);
}

namespace {

void check_inputs(double Z, double N, double a) {
    if (!(Z > 0.0) || !std::isfinite(Z)) throw DomainError("bounds: Z must be positive");
    if (!(N >= 0.0) || !std::isfinite(N)) throw DomainError("bounds: N must be >= 0");
    if (!(a > 0.0)) throw DomainError("bounds: a must be positive (inf for one nucleus)");
}

nlohmann::json ja(double a) { return jnum(a); }

}  // namespace

NegativeSideReport negative_side_report(double Z, double N, double a, const BoundConstants& k) {
    check_inputs(Z, N, a);
    k.validate();
    NegativeSideReport r{};
    r.Z = Z;
    r.N = N;
    r.a = a;
    r.constants = k;
    r.Q = excess_scale_Q(Z, N, a, k);
    r.b = k.eps0 * std::pow(r.Q, -1.0 / 7.0);
    r.Theta = std::pow(r.Q, 3.0 / 7.0);
    r.excess_bound = k.C * r.Theta;
    r.excess_bound_literal = k.C * std::pow(Z, 5.0 / 7.0) * branch_factor(Z, N, a, k, true);
    r.ionization_bound = k.C * std::pow(Z, 20.0 / 21.0);
    r.ionization_bound_free = std::pow(Z, 20.0 / 21.0 - k.delta_free);
    r.lambda_bound = k.C * std::pow(Z, 8.0 / 9.0) + k.C * std::cbrt(std::max(Z - N, 0.0)) * std::pow(Z, 2.0 / 3.0);
    r.excess = std::max(N - Z, 0.0);
    return r;
}

PositiveSideReport positive_side_report(double Z, double N, double a, const BoundConstants& k, int nu_q) {
    check_inputs(Z, N, a);
    k.validate();
    if (!(N < Z)) throw DomainError("positive_side_report: needs N < Z");
    PositiveSideReport r{};
    r.Z = Z;
    r.N = N;
    r.a = a;
    r.constants = k;
    const double d = Z - N;
    r.Q = k.refined_q ? excess_scale_Q(Z, N, a, k) : std::pow(Z, 5.0 / 3.0);
    r.r_bar = k.C1 * std::pow(d, -1.0 / 3.0);
    r.upsilon = k.C2 * std::pow(r.r_bar, -17.0 / 6.0) * std::pow(r.Q, 1.0 / 6.0);
    r.Theta = std::pow(r.upsilon, 2.5) * std::pow(r.r_bar, 7.0);
    r.Theta_scaling = std::pow(r.r_bar, -1.0 / 12.0) * std::pow(r.Q, 5.0 / 12.0);
    r.window = k.C * std::pow(r.Q, 1.0 / 6.0) * std::pow(d, 17.0 / 18.0);
    const double factor = k.refined_q ? branch_factor(Z, N, a, k, k.n_branch) : 1.0;
    r.window_theorem = k.C * std::pow(d, 17.0 / 18.0) * std::pow(Z, 5.0 / 18.0) * factor;
    r.positive_excess_bound = std::pow(Z, 5.0 / 7.0 - k.delta);
    r.min_distance_bound = std::pow(Z, -5.0 / 21.0 + k.delta1);
    r.premise_holds = N <= Z - k.C0 * std::pow(r.Q, 3.0 / 7.0);
    r.nu = std::numeric_limits<double>::quiet_NaN();
    r.upsilon_check = false;
    if (nu_q > 0 && N > 0.0) {
        r.nu = chemical_potential(Z, N, nu_q);
        r.upsilon_check = r.upsilon <= -r.nu;
    }
    return r;
}

nlohmann::json NegativeSideReport::to_json() const {
    return {{"side", "negative"},
            {"Z", jnum(Z)},
            {"N", jnum(N)},
            {"a", ja(a)},
            {"Q", jnum(Q)},
            {"b", jnum(b)},
            {"Theta", jnum(Theta)},
            {"excess", jnum(excess)},
            {"excess_bound", {{"value", jnum(excess_bound)}, {"formula", "C Q^(3/7)"}}},
            {"excess_bound_literal",
             {{"value", jnum(excess_bound_literal)}, {"formula", "C Z^(5/7) (N^-delta + (a Z^(1/3))^-delta)"}}},
            {"ionization_bound", {{"value", jnum(ionization_bound)}, {"formula", "C Z^(20/21)"}}},
            {"ionization_bound_free", {{"value", jnum(ionization_bound_free)}, {"formula", "Z^(20/21 - delta_free)"}}},
            {"lambda_bound", {{"value", jnum(lambda_bound)}, {"formula", "C Z^(8/9) + C (Z-N)_+^(1/3) Z^(2/3)"}}},
            {"constants", constants.to_json()}};
}

nlohmann::json PositiveSideReport::to_json() const {
    return {{"side", "positive"},
            {"Z", jnum(Z)},
            {"N", jnum(N)},
            {"a", ja(a)},
            {"Q", jnum(Q)},
            {"r_bar", {{"value", jnum(r_bar)}, {"formula", "C1 (Z-N)^(-1/3)"}}},
            {"upsilon", {{"value", jnum(upsilon)}, {"formula", "C2 r_bar^(-17/6) Q^(1/6)"}}},
            {"Theta", {{"value", jnum(Theta)}, {"formula", "upsilon^(5/2) r_bar^7"}}},
            {"Theta_scaling", {{"value", jnum(Theta_scaling)}, {"formula", "r_bar^(-1/12) Q^(5/12)"}}},
            {"window", {{"value", jnum(window)}, {"formula", "C Q^(1/6) (Z-N)^(17/18)"}}},
            {"window_theorem", {{"value", jnum(window_theorem)}, {"formula", "C (Z-N)^(17/18) Z^(5/18) branch"}}},
            {"positive_excess_bound", {{"value", jnum(positive_excess_bound)}, {"formula", "Z^(5/7 - delta)"}}},
            {"min_distance_bound", {{"value", jnum(min_distance_bound)}, {"formula", "Z^(-5/21 + delta1)"}}},
            {"premise_holds", premise_holds},
            {"nu", jnum(nu)},
            {"upsilon_le_minus_nu", upsilon_check},
            {"constants", constants.to_json()}};
}

}  // namespace tflab
