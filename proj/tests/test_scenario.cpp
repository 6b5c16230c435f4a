#include "doctest.h"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "wavelab/scenario.hpp"

using namespace wavelab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path temp_dir(const std::string& leaf) {
    auto p = fs::temp_directory_path() / "wavelab_test" / leaf;
    fs::remove_all(p);
    return p;
}

const char* kTinyDamped = R"({
  "name": "tiny",
  "equation": {"damping": {"family": "constant", "params": {"c": 0.5}}},
  "data": {"u1": {"width": 1.0, "amplitude": 1.0}, "u2": {"width": 1.0, "amplitude": 0.4}},
  "frequency_grid": {"min": 1e-2, "max": 3.0, "count": 24},
  "time_grid": {"t_max": 50.0, "samples": 12, "t_min": 0.5},
  "analyses": [{"type": "energy"}, {"type": "classify"}]
})";

}  // namespace

TEST_CASE("scenario parsing and field diagnostics") {
    auto sc = scenario::parse_scenario(kTinyDamped);
    CHECK(sc.name == "tiny");
    CHECK(sc.dimension == 3);
    CHECK(sc.damping.has_value());
    CHECK(sc.analyses.size() == 2);

    CHECK_THROWS_WITH_AS(scenario::parse_scenario("{]"),
                         doctest::Contains("scenario parse error"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(scenario::parse_scenario(R"({"dimension": 3})"),
                         doctest::Contains("'name'"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        scenario::parse_scenario(
            R"({"name": "x", "equation": {"speed": {"family": "constant"}}})"),
        doctest::Contains("equation.speed"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        scenario::parse_scenario(
            R"({"name": "x", "time_grid": {"t_max": 10.0, "t_min": 1.0}})"),
        doctest::Contains("time_grid"), std::invalid_argument);
}

TEST_CASE("incompatible analyses are rejected before computation") {
    // diffusion without damping names the field
    CHECK_THROWS_WITH_AS(
        scenario::parse_scenario(
            R"({"name": "x", "analyses": [{"type": "diffusion"}]})"),
        doctest::Contains("equation.damping"), std::invalid_argument);
    // floquet needs a periodic coefficient
    CHECK_THROWS_WITH_AS(
        scenario::parse_scenario(
            R"({"name": "x", "analyses": [{"type": "floquet", "lambda_max": 5.0}]})"),
        doctest::Contains("periodic"), std::invalid_argument);
    // verify referencing a trace nobody produces
    CHECK_THROWS_WITH_AS(
        scenario::parse_scenario(
            R"({"name": "x", "verify": [{"theorem_id": "matsumura", "trace": "energy"}]})"),
        doctest::Contains("trace"), std::invalid_argument);
    // unknown theorem
    CHECK_THROWS_AS(
        scenario::parse_scenario(
            R"({"name": "x",
                "analyses": [{"type": "energy"}],
                "verify": [{"theorem_id": "nope", "trace": "energy"}]})"),
        std::invalid_argument);
    // unknown analysis type
    CHECK_THROWS_WITH_AS(
        scenario::parse_scenario(R"({"name": "x", "analyses": [{"type": "wibble"}]})"),
        doctest::Contains("wibble"), std::invalid_argument);

    // a full-size invalid scenario must fail fast with no partial outputs
    const auto dir = temp_dir("invalid");
    const auto t0 = std::chrono::steady_clock::now();
    CHECK_THROWS_AS(scenario::parse_scenario(R"({
        "name": "big_invalid",
        "frequency_grid": {"min": 1e-3, "max": 20.0, "count": 4096},
        "time_grid": {"t_max": 1e6, "samples": 200},
        "analyses": [{"type": "diffusion"}]
    })"),
                    std::invalid_argument);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    CHECK(ms < 1000);
    CHECK(!fs::exists(dir));
}

TEST_CASE("run writes traces and a schema-versioned report") {
    auto sc = scenario::parse_scenario(kTinyDamped);
    const auto dir = temp_dir("tiny_run");
    auto report = scenario::run(sc, dir.string(), 2);
    CHECK(!report.numeric_failure);
    CHECK(!report.verification_failed);
    CHECK(report.report["schema_version"] == 1);
    CHECK(report.report["scenario"] == "tiny");
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "trace_energy.csv"));

    // every requested analysis has an entry
    REQUIRE(report.report["analyses"].size() == 2);
    CHECK(report.report["analyses"][0]["status"] == "ok");
    CHECK(report.report["analyses"][1]["detail"]["classification"] == "effective");

    // csv header and row count
    const auto csv = slurp(dir / "trace_energy.csv");
    CHECK(csv.rfind("t,value\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 13);  // t=0 plus 12 samples

    fs::remove_all(dir);
}

TEST_CASE("outputs are byte-identical across thread counts") {
    auto sc = scenario::parse_scenario(kTinyDamped);
    const auto d1 = temp_dir("threads1"), d4 = temp_dir("threads4");
    scenario::run(sc, d1.string(), 1);
    scenario::run(sc, d4.string(), 4);
    CHECK(slurp(d1 / "report.json") == slurp(d4 / "report.json"));
    CHECK(slurp(d1 / "trace_energy.csv") == slurp(d4 / "trace_energy.csv"));
    fs::remove_all(d1);
    fs::remove_all(d4);
}

TEST_CASE("verification failure is reported, not thrown") {
    // free wave trivially conserves energy; demanding exponent 3 must fail
    auto sc = scenario::parse_scenario(R"({
        "name": "doomed",
        "frequency_grid": {"min": 1e-2, "max": 3.0, "count": 24},
        "time_grid": {"t_max": 100.0, "samples": 40, "t_min": 0.1},
        "analyses": [{"type": "energy"}],
        "verify": [{"theorem_id": "matsumura", "trace": "energy", "tolerance": 0.05,
                    "p": 1, "q": 2}]
    })");
    const auto dir = temp_dir("doomed");
    auto report = scenario::run(sc, dir.string(), 1);
    CHECK(report.verification_failed);
    CHECK(!report.numeric_failure);
    REQUIRE(report.report["verifications"].size() == 1);
    CHECK(report.report["verifications"][0]["pass"] == false);
    CHECK(report.report["verifications"][0]["predicted"] == doctest::Approx(0.75));
    CHECK(report.report["verifications"][0]["fitted"].get<double>() ==
          doctest::Approx(0.0).epsilon(0.05));
    fs::remove_all(dir);
}

TEST_CASE("tol override is validated before any output") {
    auto sc = scenario::parse_scenario(kTinyDamped);
    const auto dir = temp_dir("badtol");
    CHECK_THROWS_AS(scenario::run(sc, dir.string(), 1, 1e-2), std::invalid_argument);
    CHECK(!fs::exists(dir));
}

TEST_CASE("catalog: coverage, round trips and descriptions") {
    const auto& all = catalog::bundled_scenarios();
    CHECK(all.size() >= 12);
    for (const auto& [name, text] : all) {
        auto sc = scenario::parse_scenario(text);  // every bundled scenario validates
        CHECK(sc.name == name);
    }
    CHECK_NOTHROW(scenario::parse_scenario(catalog::bundled_scenario("noneffective_mu03")));
    CHECK_THROWS_AS(catalog::bundled_scenario("nope"), std::invalid_argument);

    auto listing = catalog::list_text();
    CHECK(listing.find("noneffective_mu03") != std::string::npos);
    CHECK(std::count(listing.begin(), listing.end(), '\n') >= 12);

    CHECK(catalog::describe("hirosawa_nakazawa").find("t^2 E(t) -> 0") != std::string::npos);
    CHECK(catalog::describe("hirosawa_nakazawa").find("2/(1+t)") != std::string::npos);
    CHECK(catalog::describe("matsumura").find("3/4") != std::string::npos);
    CHECK_THROWS_AS(catalog::describe("nope"), std::invalid_argument);
}

TEST_CASE("bundled free_conservation scenario passes end to end") {
    auto sc = scenario::parse_scenario(catalog::bundled_scenario("free_conservation"));
    // shrink for test speed: the acceptance suite runs the full version
    sc.freq_count = 64;
    const auto dir = temp_dir("free_small");
    auto report = scenario::run(sc, dir.string(), 4);
    CHECK(!report.verification_failed);
    CHECK(!report.numeric_failure);
    const auto& energy = report.report["analyses"][0]["detail"];
    CHECK(energy["max_drift"].get<double>() <= 1e-8);
    CHECK(report.report["verifications"][0]["pass"] == true);
    fs::remove_all(dir);
}
