#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "nosetori_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Result nosetori(const std::string& args, const std::string& env = "") {
    const char* bin = std::getenv("NOSETORI_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "NOSETORI_BIN must point at the CLI");
    const auto out = scratch() / "stdout.txt";
    const auto err = scratch() / "stderr.txt";
    const std::string cmd = env + " \"" + std::string(bin) + "\" " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

const std::string kConfigs = std::string(NOSETORI_SOURCE_DIR) + "/configs/";

}  // namespace

TEST_CASE("help exits cleanly") {
    CHECK(nosetori("--help").code == 0);
    CHECK(nosetori("run --help").code == 0);
}

TEST_CASE("equilibrium") {
    const auto r = nosetori("equilibrium --potential quartic --T 1 --mu 1");
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j.at("r_star").get<double>() == doctest::Approx(0.555892970251421).epsilon(1e-14));
    CHECK(j.at("residuals").at("stationarity").get<double>() < 1e-12);

    const auto lj = nosetori("equilibrium --potential lennard_jones --T 0.8 --mu 1");
    CHECK(lj.code == 3);
    CHECK(lj.err.find("temperature outside (0, 0.75)") != std::string::npos);
}

TEST_CASE("configuration errors exit with 2") {
    CHECK(nosetori("equilibrium --potential morse --T 1 --mu 1").code == 2);
    CHECK(nosetori("equilibrium --potential quartic --mu 1").code == 2);
    CHECK(nosetori("equilibrium --bogus").code == 2);
    CHECK(nosetori("").code == 2);
    CHECK(nosetori("run --potential quartic --T 1 --a 0.1 --mu 1").code == 2);  // no h, B
    CHECK(nosetori("sweep-eta --potential quartic --T 1 --a 0.1 --mu 1 --values 0.5,abc").code == 2);
    CHECK(nosetori("reproduce fig99 -o " + (scratch() / "nofig").string()).code == 2);
    CHECK(nosetori("spectrum -i /nonexistent.csv").code == 2);
}

TEST_CASE("linearize") {
    const auto r = nosetori("linearize --potential quartic --T 1 --mu 1 --a 0.01");
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j.at("eta").get<double>() == doctest::Approx(0.02742).epsilon(1e-3));
    CHECK(j.at("omega2").get<double>() == doctest::Approx(2.18324).epsilon(1e-5));
    CHECK(nosetori("linearize --potential quartic --T 1 --mu 1 --a 0").code == 3);
}

TEST_CASE("sweep-eta") {
    const auto out = scratch() / "sweep.csv";
    const auto r = nosetori("sweep-eta --potential lennard_jones --a 1 --mu 1 --T 0.5 --variable T --values 0.3,0.8 -o " +
                            out.string());
    REQUIRE(r.code == 0);
    std::istringstream csv(slurp(out));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "x,omega1,omega2,eta,degenerate,status");
    std::getline(csv, line);
    CHECK(line.substr(line.size() - 3) == ",ok");
    std::getline(csv, line);
    CHECK(line.find("temperature outside") != std::string::npos);

    const auto range = nosetori("sweep-eta --potential quartic --T 1 --mu 1 --a 1 --variable a --range 0.01 1 3 --log");
    REQUIRE(range.code == 0);
    CHECK(range.out.find("\n0.1,") != std::string::npos);
}

TEST_CASE("run is deterministic and feeds spectrum") {
    const auto d1 = scratch() / "run1";
    const auto d2 = scratch() / "run2";
    const std::string args = "run -c " + kConfigs + "quartic_perturbed.json --span 64 -o ";
    REQUIRE(nosetori(args + d1.string()).code == 0);
    REQUIRE(nosetori(args + d2.string()).code == 0);
    for (const char* f : {"trajectory.csv", "trajectory.bin", "drift.csv", "spectrum_s.csv", "summary.json"}) {
        CAPTURE(std::string(f));
        REQUIRE(fs::exists(d1 / f));
        CHECK(slurp(d1 / f) == slurp(d2 / f));
    }
    const auto m1 = json::parse(slurp(d1 / "manifest.json"));
    const auto m2 = json::parse(slurp(d2 / "manifest.json"));
    CHECK(m1.at("config_hash") == m2.at("config_hash"));
    CHECK(m1.at("config").at("integrator").at("B").get<double>() == 64.0);

    const auto spec_bin = nosetori("spectrum -i " + (d1 / "trajectory.bin").string() + " --series s");
    const auto spec_csv = nosetori("spectrum -i " + (d1 / "trajectory.csv").string() + " --series s");
    REQUIRE(spec_bin.code == 0);
    CHECK(spec_bin.out.rfind("k,frequency,amplitude\n", 0) == 0);
    CHECK(spec_bin.out == spec_csv.out);
    CHECK(nosetori("spectrum -i " + (d1 / "trajectory.csv").string() + " --series nope").code == 2);
}

TEST_CASE("run surfaces integration failures") {
    const auto r = nosetori("run -c " + kConfigs + "quartic_perturbed.json --scheme crfr4 --thermostat winkler --param 2 -o " +
                            (scratch() / "unsplit").string());
    CHECK(r.code == 2);
    CHECK(r.err.find("unsplittable") != std::string::npos);
}

TEST_CASE("reproduce is independent of the worker count") {
    const auto d1 = scratch() / "fig1_w1";
    const auto d4 = scratch() / "fig1_w4";
    REQUIRE(nosetori("reproduce fig1 -o " + d1.string(), "NOSETORI_WORKERS=1").code == 0);
    REQUIRE(nosetori("reproduce fig1 -o " + d4.string(), "NOSETORI_WORKERS=4").code == 0);
    CHECK(slurp(d1 / "fig1_eta.csv") == slurp(d4 / "fig1_eta.csv"));
    CHECK(slurp(d1 / "manifest.json") == slurp(d4 / "manifest.json"));
    CHECK(nosetori("reproduce fig1 -o " + d1.string(), "NOSETORI_WORKERS=zero").code == 2);
}
