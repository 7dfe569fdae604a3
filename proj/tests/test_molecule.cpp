#include <cmath>

#include <doctest.h>

#include "tflab/atom.hpp"
#include "tflab/corrections.hpp"
#include "tflab/error.hpp"
#include "tflab/molecule.hpp"
#include "tflab/semiclassics.hpp"

using namespace tflab;

namespace {

GridSpec small_grid(std::size_t n = 40) {
    GridSpec s;
    s.dims = {n, n, n};
    return s;
}

const MolecularTFSolution& h2() {
    static const MolecularTFSolution sol = solve_molecule(
        NuclearConfiguration::create({1.0, 1.0}, {Vec3{-1.0, 0, 0}, Vec3{1.0, 0, 0}}, 2.0), small_grid());
    return sol;
}

}  // namespace

TEST_CASE("single nucleus reproduces the radial atom") {
    const auto atom = solve_atom(3.0, 2.0, 1);
    const auto mol = solve_molecule(NuclearConfiguration::atom(3.0, 2.0), small_grid(32));
    CHECK(mol.charge == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(mol.nu == doctest::Approx(atom.nu()).epsilon(1e-4));
    CHECK(mol.energy.total == doctest::Approx(atom.energy().total).epsilon(1e-4));
}

TEST_CASE("diatomic charge and duality") {
    const auto& s = h2();
    // neutral: nu = 0 fixes nothing, so the charge carries the 40^3 discretization error
    CHECK(s.charge == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(s.nu == 0.0);
    CHECK(s.duality_gap >= -1e-10);
    CHECK(s.duality_gap < 1e-2 * std::abs(s.energy.total));
    const auto f = energy_functionals(s);
    CHECK(f.energy == doctest::Approx(s.energy.total).epsilon(1e-12));
    // Weyl count of the molecular W equals N
    CHECK(weyl_terms(s).count == doctest::Approx(s.charge).epsilon(1e-12));
}

TEST_CASE("the TF density minimizes Phi^* at fixed nu") {
    const auto& s = h2();
    const double base = s.disc->phi_star(s.delta, s.nu, 1.0);
    CHECK(base == doctest::Approx(s.phi_star).epsilon(1e-10));
    CHECK(s.disc->phi_star(s.delta, s.nu, 1.1) > base);
    CHECK(s.disc->phi_star(s.delta, s.nu, 0.9) > base);
}

TEST_CASE("optimal allocation equalizes chemical potentials") {
    double nu = 0.0;
    const auto same = optimal_allocation({1.0, 1.0}, 1.5, 1, &nu);
    CHECK(same[0] == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(same[1] == doctest::Approx(0.75).epsilon(1e-9));

    const auto mixed = optimal_allocation({2.0, 1.0}, 2.0, 1, &nu);
    CHECK(mixed[0] + mixed[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(chemical_potential(2.0, mixed[0], 1) - chemical_potential(1.0, mixed[1], 1)) < 1e-8);
    CHECK(nu == doctest::Approx(chemical_potential(2.0, mixed[0], 1)).epsilon(1e-8));

    const auto neutral = optimal_allocation({2.0, 1.0}, 3.5, 1, &nu);
    CHECK(nu == 0.0);
}

TEST_CASE("no binding: the excess energy is positive") {
    const auto ex = excess_energy(h2());
    CHECK(ex.excess > 0.0);
    CHECK(ex.d_distance >= 0.0);
    CHECK(ex.atoms_energy == doctest::Approx(2.0 * solve_atom(1.0, 1.0, 1).energy().total).epsilon(1e-10));
}

TEST_CASE("molecular corrections") {
    const auto c = corrections(h2());
    CHECK(c.scott == doctest::Approx(2.0));
    CHECK(c.ds.dirac < 0.0);
    CHECK(c.ds.schwinger == doctest::Approx(-c.ds.dirac / 4.5).epsilon(1e-14));
}

TEST_CASE("molecule input validation") {
    GridSpec bad;
    bad.dims = {4, 4, 4};
    CHECK_THROWS_AS(solve_molecule(NuclearConfiguration::atom(1.0, 1.0), bad), DomainError);
}
