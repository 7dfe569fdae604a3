#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <doctest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
    static const fs::path d = [] {
        fs::path p = fs::temp_directory_path() / ("tflab_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return d;
}

int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + "\"" TFLAB_CLI "\" " + args + " > \"" +
                            (workdir() / "stdout.txt").string() + "\" 2> \"" + (workdir() / "stderr.txt").string() + "\"";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string out() { return slurp(workdir() / "stdout.txt"); }

}  // namespace

TEST_CASE("atom report is byte-identical across runs") {
    REQUIRE(run("atom --Z 10 --N 8") == 0);
    const std::string first = out();
    REQUIRE(run("atom --Z 10 --N 8") == 0);
    CHECK(out() == first);
    const auto j = nlohmann::json::parse(first);
    CHECK(j["Z"] == 10.0);
    CHECK(j["charge"].get<double>() == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("molecule report does not depend on the thread count") {
    const std::string args = "molecule --Z 1,1 --y \"0,0,-1;0,0,1\" --grid 24";
    REQUIRE(run(args, "TFLAB_THREADS=1") == 0);
    const std::string one = out();
    REQUIRE(run(args, "TFLAB_THREADS=4") == 0);
    CHECK(out() == one);
    const auto j = nlohmann::json::parse(one);
    CHECK(j.contains("excess"));
    CHECK(j.contains("functionals"));
}

TEST_CASE("bounds command reproduces the worked example") {
    REQUIRE(run("bounds --Z 100 --N 90") == 0);
    const auto j = nlohmann::json::parse(out());
    CHECK(j["positive"]["upsilon"]["value"].get<double>() == doctest::Approx(31.6).epsilon(2e-3));
    REQUIRE(run("bounds --Z 100 --N 90 --const C=2") == 0);
    CHECK(nlohmann::json::parse(out())["negative"]["constants"]["C"] == 2.0);
}

TEST_CASE("Kepler orbit from the command line") {
    REQUIRE(run("orbit --potential coulomb --M2 1.75 --nu -0.125") == 0);
    const auto j = nlohmann::json::parse(out())["rotation"];
    // r^2 - 8 r + 14 = 0
    CHECK(j["r1"].get<double>() == doctest::Approx(4.0 - std::sqrt(2.0)).epsilon(1e-10));
    CHECK(j["r2"].get<double>() == doctest::Approx(4.0 + std::sqrt(2.0)).epsilon(1e-10));
    CHECK(j["phi_quad"].get<double>() == doctest::Approx(3.14159265359).epsilon(1e-10));
}

TEST_CASE("files are written where asked") {
    const auto json = workdir() / "orbit.json", csv = workdir() / "sweep.csv";
    REQUIRE(run("orbit --potential coulomb --nu -0.25 --sweep 3 --out \"" + json.string() + "\" --csv \"" +
                csv.string() + "\"") == 0);
    CHECK(nlohmann::json::parse(slurp(json))["sweep"].size() == 3);
    CHECK(slurp(csv).rfind("M,nu,r1,r2,phi_quad,phi_orbit\n", 0) == 0);
    const auto spec = workdir() / "spec.csv";
    REQUIRE(run("spectrum --potential coulomb --Z 1 --level -0.05 --csv \"" + spec.string() + "\"") == 0);
    CHECK(nlohmann::json::parse(out())["count"] == 5.0);
    CHECK(slurp(spec).rfind("l,k,lambda\n", 0) == 0);
}

TEST_CASE("exit codes") {
    CHECK(run("atom --Z -1") == 2);
    CHECK(run("atom --Z abc") == 2);
    CHECK(run("atom --nope") == 2);
    CHECK(run("") == 2);
    CHECK(run("molecule --Z 1,1") == 2);
    CHECK(run("bounds --Z 10 --const bogus=1") == 2);
    CHECK(run("verify --only 5") == 0);
    CHECK(run("--help") == 0);
}
