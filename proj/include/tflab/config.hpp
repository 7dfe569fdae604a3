#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

namespace tflab {

using Vec3 = std::array<double, 3>;

double distance(const Vec3& a, const Vec3& b);

/// Problem instance: nuclear charges Z_m at positions y_m, electron number N, spin factor q.
class NuclearConfiguration {
public:
    NuclearConfiguration() = default;

    /// Validates and builds. Throws DomainError on bad input.
    static NuclearConfiguration create(std::vector<double> charges, std::vector<Vec3> positions,
                                       double electron_count, int spin_factor = 1);
    static NuclearConfiguration atom(double Z, double N, int q = 1);

    const std::vector<double>& charges() const { return charges_; }
    const std::vector<Vec3>& positions() const { return positions_; }
    double electron_count() const { return N_; }
    int spin_factor() const { return q_; }
    std::size_t size() const { return charges_.size(); }

    double total_charge() const;
    /// Smallest internuclear distance (infinity for one nucleus).
    double min_distance() const;
    /// a = half the smallest internuclear distance (infinity for one nucleus).
    double half_min_distance() const { return 0.5 * min_distance(); }

    NuclearConfiguration with_electron_count(double N) const;
    NuclearConfiguration scaled(double length_factor, double charge_factor) const;

    nlohmann::json to_json() const;
    static NuclearConfiguration from_json(const nlohmann::json& j);

private:
    std::vector<double> charges_;
    std::vector<Vec3> positions_;
    double N_ = 0.0;
    int q_ = 1;
};

struct PotentialAndRepulsion {
    double V;
    double U;
};

/// Nuclear potential V(x) and the internuclear repulsion U. Throws SingularityError at a nucleus.
PotentialAndRepulsion bare_potential_and_repulsion(const NuclearConfiguration& config, const Vec3& x);

double nuclear_repulsion(const NuclearConfiguration& config);

}  // namespace tflab
