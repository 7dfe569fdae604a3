#pragma once

#include <string>

#include <json.hpp>

namespace tflab {

/// Unpinned constants of the bound formulas. Defaults: C family 1, delta family 0.1.
struct BoundConstants {
    double C = 1.0, C0 = 1.0, C1 = 1.0, C2 = 1.0, eps0 = 1.0;
    double delta = 0.1, delta1 = 0.1, delta_free = 0.1;
    /// Branch term N^{-delta} instead of Z^{-delta} in Q.
    bool n_branch = false;
    /// Positive side: use the refined Q (same as the negative side) instead of Z^{5/3}.
    bool refined_q = false;

    void validate() const;
    /// NAME=VALUE with NAME one of C, C0, C1, C2, eps0, delta, delta1, delta_free, n_branch, refined_q.
    void set(const std::string& assignment);
    nlohmann::json to_json() const;
};

/// Q = Z^{5/3} for a <= Z^{-1/3}, else Z^{5/3} (Z^{-delta} + (a Z^{1/3})^{-delta}); N^{-delta}
/// replaces Z^{-delta} when n_branch is set. a may be infinite (one nucleus).
double excess_scale_Q(double Z, double N, double a, const BoundConstants& k);
/// Branch factor 1 or (X^{-delta} + (a Z^{1/3})^{-delta}) with X = N (default) or Z.
double branch_factor(double Z, double N, double a, const BoundConstants& k, bool use_N);

struct NegativeSideReport {
    double Z, N, a;
    double Q, b, Theta;
    double excess_bound;          // C Q^{3/7}
    double excess_bound_literal;  // C Z^{5/7} times the literal branch factor
    double ionization_bound;      // C Z^{20/21}
    double ionization_bound_free; // Z^{20/21 - delta_free}
    double lambda_bound;          // C Z^{8/9} + C (Z - N)_+^{1/3} Z^{2/3}
    double excess;                // (N - Z)_+
    BoundConstants constants;
    nlohmann::json to_json() const;
};

struct PositiveSideReport {
    double Z, N, a;
    double Q, r_bar, upsilon, Theta, Theta_scaling;
    double window;          // C Q^{1/6} (Z - N)^{17/18}
    double window_theorem;  // C (Z - N)^{17/18} Z^{5/18} times the branch factor
    double positive_excess_bound;  // Z^{5/7 - delta}
    double min_distance_bound;     // Z^{-5/21 + delta1}
    bool premise_holds;     // N <= Z - C0 Q^{3/7}
    double nu;              // chemical potential when checked, else NaN
    bool upsilon_check;     // upsilon <= -nu
    BoundConstants constants;
    nlohmann::json to_json() const;
};

NegativeSideReport negative_side_report(double Z, double N, double a, const BoundConstants& k = {});
/// nu_q > 0 computes the atomic chemical potential with that spin factor for the upsilon check.
PositiveSideReport positive_side_report(double Z, double N, double a, const BoundConstants& k = {}, int nu_q = 0);

}  // namespace tflab
