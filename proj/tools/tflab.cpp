// tflab command-line front end.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tflab/acceptance.hpp"
#include "tflab/atom.hpp"
#include "tflab/bounds.hpp"
#include "tflab/corrections.hpp"
#include "tflab/error.hpp"
#include "tflab/json_util.hpp"
#include "tflab/molecule.hpp"
#include "tflab/semiclassics.hpp"
#include "tflab/trajectories.hpp"

using namespace tflab;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Options {
    std::string Z, y, config, grid, out, csv, dump, potential = "tf";
    double N = kNaN, box = 0.0, tol = 0.0, a = std::numeric_limits<double>::infinity();
    int q = 1;
    std::vector<std::string> constants;
    bool paper_factor2 = false;
    // spectrum
    double h = 0.0, r_max = 0.0, C = 1.0, level = kNaN;
    int l_max = -1;
    // orbit
    double M = kNaN, M2 = kNaN, nu = kNaN;
    int sweep = 0;
    std::string orbit_csv;
    // verify
    std::vector<int> only;
};

std::vector<double> parse_list(const std::string& text, char sep) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw DomainError("not a number: '" + item + "'");
        }
    }
    return v;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError("malformed JSON in " + path + ": " + e.what());
    }
}

void emit(const Options& o, const nlohmann::json& j) {
    const std::string text = canonical_dump(j);
    if (o.out.empty()) std::cout << text;
    else write_text_file(o.out, text);
}

double single_charge(const Options& o) {
    const auto z = parse_list(o.Z.empty() ? "1" : o.Z, ',');
    if (z.size() != 1) throw DomainError("expected a single --Z value");
    return z[0];
}

NuclearConfiguration configuration(const Options& o, nlohmann::json* extra = nullptr) {
    if (!o.config.empty()) {
        const auto j = read_json(o.config);
        if (extra) *extra = j;
        return NuclearConfiguration::from_json(j);
    }
    const auto z = parse_list(o.Z.empty() ? "1" : o.Z, ',');
    std::vector<Vec3> y;
    if (o.y.empty()) {
        if (z.size() != 1) throw DomainError("--y is required for more than one nucleus");
        y.push_back({0.0, 0.0, 0.0});
    } else {
        std::stringstream ss(o.y);
        std::string point;
        while (std::getline(ss, point, ';')) {
            const auto c = parse_list(point, ',');
            if (c.size() != 3) throw DomainError("--y expects x,y,z triples separated by ';'");
            y.push_back({c[0], c[1], c[2]});
        }
    }
    double total = 0.0;
    for (double v : z) total += v;
    return NuclearConfiguration::create(z, y, std::isnan(o.N) ? total : o.N, o.q);
}

GridSpec grid_spec(const Options& o, const nlohmann::json& extra) {
    GridSpec s = extra.contains("grid") ? GridSpec::from_json(extra.at("grid")) : GridSpec{};
    if (!o.grid.empty()) {
        const auto d = parse_list(o.grid, 'x');
        if (d.size() == 1) s.dims = {std::size_t(d[0]), std::size_t(d[0]), std::size_t(d[0])};
        else if (d.size() == 3) s.dims = {std::size_t(d[0]), std::size_t(d[1]), std::size_t(d[2])};
        else throw DomainError("--grid expects N or NxNxN");
        for (double v : d)
            if (!(v >= 8.0) || v != std::floor(v)) throw DomainError("--grid dims must be integers >= 8");
    }
    if (o.box > 0.0) {
        s.auto_box = false;
        for (auto& ax : s.box) ax = {-o.box, o.box};
    }
    return s;
}

MoleculeTolerances tolerances(const Options& o, const nlohmann::json& extra) {
    MoleculeTolerances t = extra.contains("tol") ? MoleculeTolerances::from_json(extra.at("tol")) : MoleculeTolerances{};
    if (o.tol > 0.0) t.energy_rtol = o.tol;
    return t;
}

AtomicTFSolution atom_from(const Options& o) {
    const double Z = single_charge(o);
    ShootingTolerances st;
    if (o.tol > 0.0) st.rtol = o.tol;
    return solve_atom(Z, std::isnan(o.N) ? Z : o.N, o.q, st);
}

int cmd_atom(const Options& o) {
    const auto sol = atom_from(o);
    emit(o, atom_report(sol));
    if (!o.csv.empty()) write_text_file(o.csv, atom_profile_csv(sol));
    return 0;
}

int cmd_molecule(const Options& o) {
    nlohmann::json extra = nlohmann::json::object();
    const auto config = configuration(o, &extra);
    const auto sol = solve_molecule(config, grid_spec(o, extra), tolerances(o, extra));
    nlohmann::json j = sol.report();
    const auto f = energy_functionals(sol);
    j["functionals"] = {{"energy", jnum(f.energy)}, {"phi_star", jnum(f.phi_star)}, {"phi_sub", jnum(f.phi_sub)},
                        {"duality_gap", jnum(f.duality_gap)}};
    if (config.size() >= 2) {
        const auto ex = excess_energy(sol);
        j["excess"] = {{"excess", jnum(ex.excess)},           {"allocation", jvec(ex.allocation)},
                       {"common_nu", jnum(ex.common_nu)},     {"atoms_energy", jnum(ex.atoms_energy)},
                       {"d_distance", jnum(ex.d_distance)},   {"d_ratio", jnum(ex.d_ratio)}};
    }
    if (!o.dump.empty()) {
        dump_field(sol.W, o.dump + "_W");
        dump_field(sol.rho, o.dump + "_rho");
    }
    emit(o, j);
    return 0;
}

int cmd_spectrum(const Options& o) {
    if (o.potential == "coulomb") {
        const double Z = single_charge(o);
        SpectrumOptions so;
        so.h = o.h > 0.0 ? o.h : 1e-3 / Z;
        so.r_max = o.r_max > 0.0 ? o.r_max : 40.0 / Z;
        so.l_max = o.l_max;
        so.coulomb_charge = Z;
        const auto s = radial_spectrum([Z](double r) { return Z / r; }, o.q, so);
        const double level = std::isnan(o.level) ? 0.0 : o.level;
        nlohmann::json lowest = nlohmann::json::array();
        for (const auto& ch : s.eigenvalues) lowest.push_back(ch.empty() ? jnum(kNaN) : jnum(ch.front()));
        emit(o, {{"potential", "coulomb"}, {"Z", jnum(Z)}, {"q", o.q}, {"level", jnum(level)},
                 {"count", jnum(s.count(level))}, {"trace", jnum(s.trace(level))}, {"lowest_per_l", lowest},
                 {"h", jnum(s.h)}, {"r_max", jnum(s.r_max)}});
        if (!o.csv.empty()) write_text_file(o.csv, s.csv());
        return 0;
    }
    if (o.potential != "tf") throw DomainError("--potential must be tf or coulomb");
    const auto sol = atom_from(o);
    SpectrumOptions so = atomic_spectrum_options(sol);
    if (o.h > 0.0) so.h = o.h;
    if (o.r_max > 0.0) so.r_max = o.r_max;
    so.l_max = o.l_max;
    const auto rep = spectral_report(sol, so, o.C);
    nlohmann::json j = rep.to_json();
    j["remainder"] = remainder_scales(sol, std::numeric_limits<double>::infinity(), o.C).to_json();
    emit(o, j);
    if (!o.csv.empty()) write_text_file(o.csv, rep.spectrum.csv());
    return 0;
}

int cmd_corrections(const Options& o) {
    nlohmann::json extra = nlohmann::json::object();
    const auto config = configuration(o, &extra);
    if (config.size() == 1) {
        const double Z = config.charges()[0];
        emit(o, corrections(solve_atom(Z, config.electron_count(), config.spin_factor()), o.C).to_json());
        return 0;
    }
    const auto sol = solve_molecule(config, grid_spec(o, extra), tolerances(o, extra));
    emit(o, corrections(sol, o.C).to_json());
    return 0;
}

int cmd_bounds(const Options& o) {
    BoundConstants k;
    for (const auto& c : o.constants) k.set(c);
    double Z, N, a = o.a;
    if (!o.config.empty()) {
        const auto config = configuration(o);
        Z = config.total_charge();
        N = config.electron_count();
        a = config.half_min_distance();
    } else {
        Z = single_charge(o);
        N = std::isnan(o.N) ? Z : o.N;
    }
    nlohmann::json j;
    j["negative"] = negative_side_report(Z, N, a, k).to_json();
    if (N < Z) j["positive"] = positive_side_report(Z, N, a, k, o.q).to_json();
    emit(o, j);
    return 0;
}

int cmd_orbit(const Options& o) {
    const double Z = single_charge(o);
    const CentralPotential pot = o.potential == "coulomb" ? CentralPotential::coulomb(Z)
                                 : o.potential == "tf"
                                     ? CentralPotential::from_atom(solve_atom(Z, std::isnan(o.N) ? Z : o.N, o.q))
                                     : throw DomainError("--potential must be tf or coulomb");
    if (std::isnan(o.nu)) throw DomainError("--nu is required");
    RotationOptions ro;
    ro.paper_factor2 = o.paper_factor2;
    const auto circ = circular_orbit(pot, o.nu, o.paper_factor2);
    nlohmann::json j{{"potential", o.potential}, {"Z", jnum(Z)}, {"nu", jnum(o.nu)}, {"circular", circ.to_json()},
                     {"paper_factor2", o.paper_factor2}};
    double M = !std::isnan(o.M) ? o.M : !std::isnan(o.M2) ? std::sqrt(o.M2) : kNaN;
    if (!std::isnan(M)) {
        const auto r = rotation_number(pot, M, o.nu, ro);
        j["rotation"] = r.to_json();
        if (!o.orbit_csv.empty()) {
            const double m = o.paper_factor2 ? M / std::sqrt(2.0) : M;
            OrbitState s;
            s.x = {r.r1, 0.0};
            s.p = {0.0, m / r.r1};
            const double dt = r.radial_period / 2000.0;
            write_text_file(o.orbit_csv, integrate_orbit(pot, s, o.nu, 4.0 * r.radial_period, dt, 10).csv());
        }
    }
    if (o.sweep > 0) {
        std::vector<RotationResult> rows;
        nlohmann::json list = nlohmann::json::array();
        for (int i = 0; i < o.sweep; ++i) {
            const double f = o.sweep == 1 ? 0.5 : 0.2 + 0.75 * double(i) / double(o.sweep - 1);
            rows.push_back(rotation_number(pot, f * circ.M, o.nu, ro));
            list.push_back(rows.back().to_json());
        }
        j["sweep"] = list;
        if (!o.csv.empty()) write_text_file(o.csv, rotation_csv(rows));
    }
    emit(o, j);
    return 0;
}

int cmd_verify(const Options& o) {
    AcceptanceOptions ao;
    ao.only = o.only;
    ao.on_result = [](const CriterionResult& r) { std::cout << format_line(r) << std::endl; };
    const auto results = run_acceptance(ao);
    bool all = true;
    for (const auto& r : results) all = all && r.pass;
    if (!o.out.empty()) write_text_file(o.out, canonical_dump(acceptance_json(results)));
    std::cout << (all ? "all criteria passed" : "some criteria failed") << std::endl;
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thomas-Fermi laboratory"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* s) {
        s->add_option("--Z", o.Z, "nuclear charge(s), comma separated");
        s->add_option("--N", o.N, "electron number (default: total charge)");
        s->add_option("--q", o.q, "spin factor")->check(CLI::PositiveNumber);
        s->add_option("--out", o.out, "JSON report path (default: stdout)");
        s->add_option("--tol", o.tol, "solver tolerance")->check(CLI::PositiveNumber);
    };
    auto molecular = [&](CLI::App* s) {
        s->add_option("--y", o.y, "positions as x,y,z;x,y,z");
        s->add_option("--config", o.config, "configuration JSON")->check(CLI::ExistingFile);
        s->add_option("--grid", o.grid, "grid dims N or NxNxN");
        s->add_option("--box", o.box, "box half-width")->check(CLI::PositiveNumber);
    };

    auto* atom = app.add_subcommand("atom", "radial TF atom");
    common(atom);
    atom->add_option("--csv", o.csv, "profile CSV r,W,rho");

    auto* mol = app.add_subcommand("molecule", "3D TF molecule");
    common(mol);
    molecular(mol);
    mol->add_option("--dump", o.dump, "field dump prefix (W and rho, .bin + .json)");

    auto* spec = app.add_subcommand("spectrum", "radial eigenvalues vs Weyl terms");
    common(spec);
    spec->add_option("--potential", o.potential, "tf or coulomb");
    spec->add_option("--step", o.h, "radial step")->check(CLI::PositiveNumber);
    spec->add_option("--rmax", o.r_max, "outer radius")->check(CLI::PositiveNumber);
    spec->add_option("--lmax", o.l_max, "largest angular momentum (default: automatic)");
    spec->add_option("--level", o.level, "count/trace level for the coulomb potential");
    spec->add_option("--C", o.C, "constant of the remainder and lambda bounds")->check(CLI::PositiveNumber);
    spec->add_option("--csv", o.csv, "eigenvalue CSV l,k,lambda");

    auto* corr = app.add_subcommand("corrections", "Scott, Dirac and Schwinger terms");
    common(corr);
    molecular(corr);
    corr->add_option("--C", o.C, "constant of the remainder R")->check(CLI::PositiveNumber);

    auto* bnd = app.add_subcommand("bounds", "excess charge and ionization bounds");
    common(bnd);
    bnd->add_option("--y", o.y, "positions as x,y,z;x,y,z");
    bnd->add_option("--config", o.config, "configuration JSON")->check(CLI::ExistingFile);
    bnd->add_option("--a", o.a, "half the smallest internuclear distance (default: inf)");
    bnd->add_option("--const", o.constants, "NAME=VALUE override (repeatable)");

    auto* orb = app.add_subcommand("orbit", "classical orbits in a central potential");
    common(orb);
    orb->add_option("--potential", o.potential, "tf or coulomb");
    orb->add_option("--M", o.M, "angular momentum")->check(CLI::PositiveNumber);
    orb->add_option("--M2", o.M2, "squared angular momentum")->check(CLI::PositiveNumber);
    orb->add_option("--nu", o.nu, "energy level");
    orb->add_option("--sweep", o.sweep, "number of M values in [0.2, 0.95] M_circ");
    orb->add_option("--csv", o.csv, "sweep CSV M,nu,r1,r2,phi_quad,phi_orbit");
    orb->add_option("--orbit-csv", o.orbit_csv, "trajectory CSV t,x,y,px,py");
    orb->add_flag("--paper-factor2", o.paper_factor2, "use 2(W+nu) in the rotation-number radicand");

    auto* ver = app.add_subcommand("verify", "run the acceptance suite");
    ver->add_option("--out", o.out, "JSON report path");
    ver->add_option("--only", o.only, "criterion ids")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*atom) return cmd_atom(o);
        if (*mol) return cmd_molecule(o);
        if (*spec) return cmd_spectrum(o);
        if (*corr) return cmd_corrections(o);
        if (*bnd) return cmd_bounds(o);
        if (*orb) return cmd_orbit(o);
        if (*ver) return cmd_verify(o);
    } catch (const ConvergenceError& e) {
        std::cerr << "tflab: " << e.what() << '\n';
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "tflab: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "tflab: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
