#include "tflab/config.hpp"

#include <cmath>
#include <limits>

#include "tflab/error.hpp"

namespace tflab {

double distance(const Vec3& a, const Vec3& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

NuclearConfiguration NuclearConfiguration::create(std::vector<double> charges, std::vector<Vec3> positions,
                                                  double electron_count, int spin_factor) {
    if (charges.size() != positions.size())
        throw DomainError("configuration: charges and positions differ in length");
    for (double z : charges)
        if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("configuration: nuclear charges must be positive");
    for (const auto& p : positions)
        for (double c : p)
            if (!std::isfinite(c)) throw DomainError("configuration: non-finite position");
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            if (!(distance(positions[i], positions[j]) > 0.0))
                throw DomainError("configuration: coincident nuclei");
    if (!(electron_count >= 0.0) || !std::isfinite(electron_count))
        throw DomainError("configuration: electron count must be >= 0");
    if (spin_factor < 1) throw DomainError("configuration: spin factor must be a positive integer");
    NuclearConfiguration c;
    c.charges_ = std::move(charges);
    c.positions_ = std::move(positions);
    c.N_ = electron_count;
    c.q_ = spin_factor;
    return c;
}

NuclearConfiguration NuclearConfiguration::atom(double Z, double N, int q) {
    return create({Z}, {Vec3{0.0, 0.0, 0.0}}, N, q);
}

double NuclearConfiguration::total_charge() const {
    double z = 0.0;
    for (double c : charges_) z += c;
    return z;
}

double NuclearConfiguration::min_distance() const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < positions_.size(); ++i)
        for (std::size_t j = i + 1; j < positions_.size(); ++j) d = std::min(d, distance(positions_[i], positions_[j]));
    return d;
}

NuclearConfiguration NuclearConfiguration::with_electron_count(double N) const {
    return create(charges_, positions_, N, q_);
}

NuclearConfiguration NuclearConfiguration::scaled(double length_factor, double charge_factor) const {
    std::vector<double> z = charges_;
    for (double& c : z) c *= charge_factor;
    std::vector<Vec3> y = positions_;
    for (auto& p : y)
        for (double& c : p) c *= length_factor;
    return create(std::move(z), std::move(y), N_ * charge_factor, q_);
}

nlohmann::json NuclearConfiguration::to_json() const {
    nlohmann::json j;
    j["Z"] = charges_;
    nlohmann::json ys = nlohmann::json::array();
    for (const auto& p : positions_) ys.push_back({p[0], p[1], p[2]});
    j["y"] = ys;
    j["N"] = N_;
    j["q"] = q_;
    return j;
}

NuclearConfiguration NuclearConfiguration::from_json(const nlohmann::json& j) {
    try {
        std::vector<double> z = j.at("Z").get<std::vector<double>>();
        std::vector<Vec3> y;
        for (const auto& p : j.at("y")) {
            if (!p.is_array() || p.size() != 3) throw DomainError("configuration: each position needs 3 coordinates");
            y.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
        }
        const double N = j.at("N").get<double>();
        const int q = j.contains("q") ? j.at("q").get<int>() : 1;
        return create(std::move(z), std::move(y), N, q);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("configuration: malformed JSON: ") + e.what());
    }
}

double nuclear_repulsion(const NuclearConfiguration& config) {
    const auto& z = config.charges();
    const auto& y = config.positions();
    double u = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j) u += z[i] * z[j] / distance(y[i], y[j]);
    return u;
}

PotentialAndRepulsion bare_potential_and_repulsion(const NuclearConfiguration& config, const Vec3& x) {
    double v = 0.0;
    for (std::size_t m = 0; m < config.size(); ++m) {
        const double r = distance(x, config.positions()[m]);
        if (!(r > 0.0)) throw SingularityError("bare potential evaluated at a nucleus");
        v += config.charges()[m] / r;
    }
    return {v, nuclear_repulsion(config)};
}

}  // namespace tflab
