#pragma once

// Scenario-driven experiment runner: parses a JSON configuration, builds the
// coefficient profiles and spectral data, executes the requested analyses and
// emits CSV traces plus a deterministic JSON report.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wavelab/coeffs.hpp"

namespace wavelab::scenario {

struct CoefficientSpec {
    std::string family;
    std::map<std::string, double> params;
};

struct Scenario {
    std::string name;
    int dimension = 3;
    std::optional<CoefficientSpec> speed;
    std::optional<CoefficientSpec> damping;
    std::optional<CoefficientSpec> mass;
    // gaussian data pairs
    double u1_width = 1.0, u1_amplitude = 1.0;
    double u2_width = 1.0, u2_amplitude = 0.0;
    // frequency grid
    double freq_min = 1e-3, freq_max = 12.0;
    int freq_count = 512;
    std::string clustering = "log";  // "log" | "uniform"
    // geometric time grid (plus the t = 0 sample)
    double t_min = 0.0;  // defaults to t_max / 1000
    double t_max = 200.0;
    int time_samples = 40;
    double tol = 1e-10;

    struct Analysis {
        std::string type;
        nlohmann::json options;
    };
    std::vector<Analysis> analyses;

    struct Verify {
        std::string theorem_id;
        double tolerance = 0.05;
        std::string trace = "energy";  // name of an analysis-produced trace
        double p = 2.0, q = 2.0;       // q <= 0 encodes infinity
        int k = 0, alpha_order = 0;
        std::string quantity = "field";
        // optional profile-derived expectation replacing the theorem table
        std::optional<double> expected_exponent;
    };
    std::vector<Verify> verifications;
};

// Throws std::invalid_argument naming the offending field. Validation covers
// cross-field compatibility (e.g. diffusion requires damping) so bad
// scenarios fail before any computation starts.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);

struct RunReport {
    nlohmann::json report;
    bool verification_failed = false;
    bool numeric_failure = false;
};

// Executes all analyses, writes {out_dir}/trace_*.csv, scan_*.csv and
// report.json. Outputs are byte-identical for any thread count.
RunReport run(const Scenario& scenario, const std::string& out_dir, int threads,
              double tol_override = 0.0);

}  // namespace wavelab::scenario

namespace wavelab::catalog {

// name -> scenario JSON; covers every acceptance check.
const std::vector<std::pair<std::string, std::string>>& bundled_scenarios();
std::string bundled_scenario(const std::string& name);  // throws on unknown name
std::string list_text();
std::string describe(const std::string& theorem_id);  // throws on unknown id

}  // namespace wavelab::catalog
