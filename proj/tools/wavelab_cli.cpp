// wavelab: scenario-driven runs of the time-dependent wave models.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage or validation error,
// 3 numeric failure during an analysis.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "wavelab/coeffs.hpp"
#include "wavelab/floquet.hpp"
#include "wavelab/scenario.hpp"
#include "wavelab/spectral.hpp"

namespace {

int cmd_run(const std::string& scenario_arg, const std::string& out_dir, int threads,
            double tol_override) {
    wavelab::scenario::Scenario sc;
    try {
        if (std::filesystem::exists(scenario_arg))
            sc = wavelab::scenario::load_scenario_file(scenario_arg);
        else
            sc = wavelab::scenario::parse_scenario(wavelab::catalog::bundled_scenario(scenario_arg));
    } catch (const std::invalid_argument& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    }
    const std::string dir = out_dir.empty() ? "out/" + sc.name : out_dir;
    const auto start = std::chrono::steady_clock::now();
    wavelab::scenario::RunReport report;
    try {
        report = wavelab::scenario::run(sc, dir, threads, tol_override);
    } catch (const std::invalid_argument& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return 3;
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    std::cout << sc.name << ": wrote " << report.report["outputs"].size() << " files to " << dir
              << " in " << ms << " ms\n";
    for (const auto& v : report.report["verifications"]) {
        std::cout << "  verify " << v["theorem_id"].get<std::string>() << ": "
                  << (v["pass"].get<bool>() ? "pass" : "FAIL");
        if (v.contains("fitted"))
            std::cout << " (fitted " << v["fitted"].get<double>() << ", predicted "
                      << v["predicted"].get<double>() << ")";
        std::cout << "\n";
    }
    if (report.numeric_failure) {
        std::cerr << "one or more analyses failed; see " << dir << "/report.json\n";
        return 3;
    }
    return report.verification_failed ? 1 : 0;
}

bool selftest_check(const char* name, bool ok, int& failures) {
    std::printf("%-34s %s\n", name, ok ? "pass" : "FAIL");
    if (!ok) ++failures;
    return ok;
}

int cmd_selftest() {
    using namespace wavelab;
    int failures = 0;

    // Abel identity: det of the period monodromy equals exp(-2 int_0^T b)
    {
        floquet::HillProblem problem;
        problem.speed = coeffs::CoefficientProfile::periodic_speed(1.0, 0.3, 2.0);
        problem.damping = coeffs::CoefficientProfile::constant(0.25);
        double worst = 0.0;
        for (double lam : {0.5, 1.0, 2.0, 4.0}) {
            const auto M = floquet::monodromy(problem, lam, 1e-12);
            worst = std::max(worst, std::abs(M.det() - std::exp(-2.0 * 0.25 * 2.0)));
        }
        selftest_check("abel identity", worst <= 1e-8, failures);
    }

    // Parseval: assembled spectral L^2 norm matches the closed form
    {
        spectral::FrequencyGrid grid;
        grid.rho_max = 12.0;
        grid.count = 256;
        auto data = spectral::gaussian_data(3, {1.0, 1.0, 1.0, 0.0}, grid);
        double sum = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i)
            sum += data.weights[i] * std::norm(data.u1_hat[i]);
        const double exact = std::pow(3.14159265358979323846, 1.5);  // ||e^{-r^2/2}||^2 in R^3
        selftest_check("parseval", std::abs(sum - exact) <= 1e-6 * exact, failures);
    }

    // Thread-count determinism on a short damped ensemble
    {
        auto sc = scenario::parse_scenario(R"({
            "name": "selftest",
            "equation": {"damping": {"family": "constant", "params": {"c": 0.5}}},
            "frequency_grid": {"min": 1e-2, "max": 3.0, "count": 24},
            "time_grid": {"t_max": 50.0, "samples": 12, "t_min": 0.5},
            "analyses": [{"type": "energy"}]
        })");
        const auto tmp = std::filesystem::temp_directory_path() / "wavelab_selftest";
        scenario::run(sc, (tmp / "a").string(), 1);
        scenario::run(sc, (tmp / "b").string(), 4);
        auto slurp = [](const std::filesystem::path& p) {
            std::ifstream in(p, std::ios::binary);
            return std::string(std::istreambuf_iterator<char>(in), {});
        };
        const bool same = slurp(tmp / "a" / "report.json") == slurp(tmp / "b" / "report.json") &&
                          slurp(tmp / "a" / "trace_energy.csv") ==
                              slurp(tmp / "b" / "trace_energy.csv");
        std::filesystem::remove_all(tmp);
        selftest_check("thread determinism", same, failures);
    }

    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-dependent wave equation experiments"};
    app.require_subcommand(1);

    std::string scenario_arg, out_dir;
    int threads = 1;
    double tol_override = 0.0;
    auto* run = app.add_subcommand("run", "execute a scenario (bundled name or JSON file path)");
    run->add_option("--scenario", scenario_arg, "scenario name or path")->required();
    run->add_option("--out", out_dir, "output directory (default out/<name>)");
    run->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    run->add_option("--tol-override", tol_override, "override the integrator tolerance");

    auto* list = app.add_subcommand("list", "list bundled scenarios");

    std::string theorem_id;
    auto* describe = app.add_subcommand("describe", "describe a theorem check");
    describe->add_option("theorem_id", theorem_id, "theorem identifier")->required();

    auto* selftest = app.add_subcommand("selftest", "run quick infrastructure invariants");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(scenario_arg, out_dir, threads, tol_override);
        if (list->parsed()) {
            std::cout << wavelab::catalog::list_text();
            return 0;
        }
        if (describe->parsed()) {
            try {
                std::cout << wavelab::catalog::describe(theorem_id) << "\n";
            } catch (const std::invalid_argument& e) {
                std::cerr << e.what() << "\n";
                return 2;
            }
            return 0;
        }
        if (selftest->parsed()) return cmd_selftest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
