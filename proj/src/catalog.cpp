#include "wavelab/scenario.hpp"

#include <sstream>
#include <stdexcept>

namespace wavelab::catalog {

namespace {

// Bundled scenario catalog. Periods and horizons are multiples of
// 2 pi = 6.283185307179586 written out as decimals.
const std::vector<std::pair<std::string, std::string>> kScenarios = {

    {"free_conservation", R"({
  "name": "free_conservation",
  "dimension": 3,
  "data": {"u1": {"width": 1.0, "amplitude": 1.0}},
  "frequency_grid": {"min": 1e-3, "max": 12.0, "count": 512, "clustering": "log"},
  "time_grid": {"t_max": 200.0, "samples": 40, "t_min": 0.2},
  "tol": 1e-12,
  "analyses": [{"type": "energy"}],
  "verify": [{"theorem_id": "free_strichartz", "trace": "energy", "tolerance": 0.02,
              "p": 2, "q": 2}]
})"},

    {"free_dispersive", R"({
  "name": "free_dispersive",
  "dimension": 3,
  "data": {"u1": {"width": 1.0, "amplitude": 1.0}},
  "frequency_grid": {"min": 1e-3, "max": 6.0, "count": 900, "clustering": "uniform"},
  "time_grid": {"t_max": 100.0, "samples": 40, "t_min": 0.1},
  "analyses": [{"type": "dispersive", "p": 1, "q": "inf", "quantity": "velocity"}],
  "verify": [{"theorem_id": "free_strichartz", "trace": "dispersive", "tolerance": 0.1,
              "p": 1, "q": "inf", "quantity": "velocity"}]
})"},

    {"yagdjian_growth", R"({
  "name": "yagdjian_growth",
  "dimension": 3,
  "equation": {"speed": {"family": "periodic_speed",
                         "params": {"c0": 1.0, "eps": 0.4, "T": 6.283185307179586}}},
  "frequency_grid": {"min": 1e-3, "max": 4.0, "count": 16, "clustering": "log"},
  "time_grid": {"t_max": 100.0, "samples": 10},
  "analyses": [{"type": "floquet", "lambda_max": 5.0, "scan_points": 500,
                "demo": {"horizon": 502.6548245743669, "modes": 32,
                         "amplitude": 1e10, "diagnostic_time": 125.66370614359172}}]
})"},

    {"borg_constant", R"({
  "name": "borg_constant",
  "dimension": 3,
  "equation": {"speed": {"family": "periodic_speed",
                         "params": {"c0": 1.0, "eps": 0.0, "T": 6.283185307179586}}},
  "frequency_grid": {"min": 1e-3, "max": 4.0, "count": 16, "clustering": "log"},
  "time_grid": {"t_max": 100.0, "samples": 10},
  "analyses": [{"type": "floquet", "lambda_max": 25.0, "scan_points": 600}]
})"},

    {"twosided_logsine", R"({
  "name": "twosided_logsine",
  "dimension": 3,
  "equation": {"speed": {"family": "log_sine", "params": {"c0": 2.0, "c1": 1.0}}},
  "data": {"u1": {"width": 1.0, "amplitude": 1.0}},
  "frequency_grid": {"min": 1e-3, "max": 5.0, "count": 48, "clustering": "log"},
  "time_grid": {"t_max": 1e4, "samples": 60, "t_min": 1.0},
  "tol": 1e-8,
  "analyses": [{"type": "energy", "fit_decades": 2}]
})"},

    {"stabilisation_sinepower", R"({
  "name": "stabilisation_sinepower",
  "dimension": 3,
  "equation": {"speed": {"family": "sine_power",
                         "params": {"c0": 2.0, "c1": 1.0, "alpha": 0.5}}},
  "frequency_grid": {"min": 1e-3, "max": 4.0, "count": 16, "clustering": "log"},
  "time_grid": {"t_max": 1e4, "samples": 10},
  "analyses": [{"type": "stabilisation", "limit": 2.0, "t_max": 1e4, "points": 160}]
})"},

    {"stabilisation_bumps", R"({
  "name": "stabilisation_bumps",
  "dimension": 3,
  "equation": {"speed": {"family": "bump_sum", "params": {"p": 0.7, "q": 0.4, "bumps": 10}}},
  "frequency_grid": {"min": 1e-3, "max": 4.0, "count": 16, "clustering": "log"},
  "time_grid": {"t_max": 2100.0, "samples": 10},
  "analyses": [{"type": "stabilisation", "limit": 1.0, "t_max": 2100.0, "points": 160}]
})"},

    {"noneffective_mu03", R"({
  "name": "noneffective_mu03",
  "dimension": 3,
  "equation": {"damping": {"family": "inverse_damping", "params": {"mu": 0.3}}},
  "data": {"u1": {"width": 1.0, "amplitude": 1.0}, "u2": {"width": 1.0, "amplitude": 0.4}},
  "frequency_grid": {"min": 1e-3, "max": 4.0, "count": 48, "clustering": "log"},
  "time_grid": {"t_max": 1e4, "samples": 60, "t_min": 1.0},
  "tol": 1e-9,
  "analyses": [{"type": "energy"}, {"type": "classify"}, {"type": "scattering"}],
  "verify": [{"theorem_id": "wirth_noneffective", "trace": "energy", "tolerance": 0.05,
              "p": 2, "q": 2, "expected_exponent": 0.6}]
})"},

    {"overdamping_mu2", R"({
  "name": "overdamping_mu2",
  "dimension": 3,
  "equation": {"damping": {"family": "inverse_damping", "params": {"mu": 2.0}}},
  "data": {"u1": {"width": 1.0, "amplitude": 1.0}, "u2": {"width": 1.0, "amplitude": 0.4}},
  "frequency_grid": {"min": 1e-3, "max": 4.0, "count": 48, "clustering": "log"},
  "time_grid": {"t_max": 1e4, "samples": 49, "t_min": 1.0},
  "tol": 1e-9,
  "analyses": [{"type": "energy"}, {"type": "classify"},
               {"type": "overdamping", "t_early": 100.0}]
})"},

    {"modulated_mu06", R"({
  "name": "modulated_mu06",
  "dimension": 3,
  "equation": {"damping": {"family": "modulated_damping", "params": {"mu0": 0.6, "alpha": 0.5}}},
  "data": {"u1": {"width": 1.0, "amplitude": 1.0}, "u2": {"width": 1.0, "amplitude": 0.4}},
  "frequency_grid": {"min": 1e-3, "max": 4.0, "count": 48, "clustering": "log"},
  "time_grid": {"t_max": 1e4, "samples": 60, "t_min": 1.0},
  "tol": 1e-9,
  "analyses": [{"type": "energy"}],
  "verify": [{"theorem_id": "wirth_noneffective", "trace": "energy", "tolerance": 0.1,
              "p": 2, "q": 2, "expected_exponent": 0.6}]
})"},

    {"effective_power05", R"({
  "name": "effective_power05",
  "dimension": 3,
  "equation": {"damping": {"family": "power_damping", "params": {"gamma": 0.5}}},
  "data": {"u1": {"width": 1.0, "amplitude": 1.0}},
  "frequency_grid": {"min": 1e-3, "max": 4.0, "count": 48, "clustering": "log"},
  "time_grid": {"t_max": 1e4, "samples": 60, "t_min": 1.0},
  "tol": 1e-9,
  "analyses": [{"type": "dispersive", "p": 2, "q": 2, "quantity": "velocity"},
               {"type": "classify"}],
  "verify": [{"theorem_id": "wirth_effective", "trace": "dispersive", "tolerance": 0.1,
              "p": 2, "q": 2, "quantity": "velocity"}]
})"},

    {"matsumura_2b1", R"({
  "name": "matsumura_2b1",
  "dimension": 3,
  "equation": {"damping": {"family": "constant", "params": {"c": 0.5}}},
  "data": {"u1": {"width": 1.0, "amplitude": 1.0}, "u2": {"width": 1.0, "amplitude": 0.4}},
  "frequency_grid": {"min": 1e-3, "max": 4.0, "count": 48, "clustering": "log"},
  "time_grid": {"t_max": 1e4, "samples": 60, "t_min": 1.0},
  "tol": 1e-9,
  "analyses": [{"type": "dispersive", "p": 2, "q": 2, "quantity": "field"}],
  "verify": [{"theorem_id": "matsumura", "trace": "dispersive", "tolerance": 0.1,
              "p": 1, "q": 2}]
})"},

    {"diffusion_const", R"({
  "name": "diffusion_const",
  "dimension": 3,
  "equation": {"damping": {"family": "constant", "params": {"c": 0.5}}},
  "data": {"u1": {"width": 1.0, "amplitude": 1.0}, "u2": {"width": 1.0, "amplitude": 0.4}},
  "frequency_grid": {"min": 1e-3, "max": 4.0, "count": 48, "clustering": "log"},
  "time_grid": {"t_max": 2000.0, "samples": 40, "t_min": 1.0},
  "analyses": [{"type": "diffusion", "mode": "fixed", "alpha": 1.0, "beta": 1.0,
                "alpha_perturbation": 1.2}]
})"},

    {"diffusion_periodic", R"({
  "name": "diffusion_periodic",
  "dimension": 3,
  "equation": {"damping": {"family": "periodic_damping",
                           "params": {"b0": 0.5, "b1": 0.3, "T": 6.283185307179586}}},
  "data": {"u1": {"width": 1.0, "amplitude": 1.0}, "u2": {"width": 1.0, "amplitude": 0.4}},
  "frequency_grid": {"min": 1e-3, "max": 4.0, "count": 48, "clustering": "log"},
  "time_grid": {"t_max": 2000.0, "samples": 40, "t_min": 1.0},
  "analyses": [{"type": "diffusion", "mode": "estimated", "alpha_perturbation": 1.2},
               {"type": "estimate"}]
})"},

    {"estimator_constant", R"({
  "name": "estimator_constant",
  "dimension": 3,
  "equation": {"damping": {"family": "constant", "params": {"c": 0.5}}},
  "frequency_grid": {"min": 1e-3, "max": 4.0, "count": 16, "clustering": "log"},
  "time_grid": {"t_max": 100.0, "samples": 10},
  "analyses": [{"type": "estimate", "lambda0": 0.1, "rungs": 9}]
})"},

    {"liouville_powershape", R"({
  "name": "liouville_powershape",
  "dimension": 3,
  "equation": {"speed": {"family": "power_shape", "params": {"l": 1.0}}},
  "frequency_grid": {"min": 1e-3, "max": 4.0, "count": 16, "clustering": "log"},
  "time_grid": {"t_max": 100.0, "samples": 10},
  "analyses": [{"type": "liouville", "horizon": 100.0, "lambda_spec": 1.0,
                "t_check": 1e4, "tol": 1e-8}]
})"},
};

}  // namespace

const std::vector<std::pair<std::string, std::string>>& bundled_scenarios() { return kScenarios; }

std::string bundled_scenario(const std::string& name) {
    for (const auto& [n, text] : kScenarios)
        if (n == name) return text;
    throw std::invalid_argument("unknown bundled scenario '" + name + "'");
}

std::string list_text() {
    std::ostringstream out;
    for (const auto& [name, text] : kScenarios) {
        auto sc = scenario::parse_scenario(text);
        out << name << "  (";
        bool first = true;
        for (const auto& a : sc.analyses) {
            if (!first) out << ", ";
            out << a.type;
            first = false;
        }
        out << ")\n";
    }
    return out.str();
}

std::string describe(const std::string& theorem_id) {
    if (theorem_id == "free_strichartz")
        return "Free wave equation u_tt = a^2 Laplacian u with constant speed: energy is\n"
               "conserved and the L^p -> L^q dispersive estimate decays like\n"
               "(1+t)^(-(n-1)/2 (1/p - 1/q)) for conjugate exponents.\n"
               "Scenarios: free_conservation, free_dispersive.";
    if (theorem_id == "reissig_smith")
        return "Bounded oscillating speed a(t) (e.g. LogSine) under symbol-like derivative\n"
               "bounds: the free Strichartz decay (n-1)/2 (1/p - 1/q) survives in the clock\n"
               "1+t, and the energy stays within a two-sided band [C1 E(0), C2 E(0)].\n"
               "Scenario: twosided_logsine (the run reports the band).";
    if (theorem_id == "reissig_yagdjian")
        return "Increasing speed a(t) = lambda(t) b(t) with shape Lambda(t): Strichartz-type\n"
               "decay (n-1)/2 (1/p - 1/q) measured in the clock Lambda(t), with an extra\n"
               "factor sqrt(lambda(t)) on the energy side.";
    if (theorem_id == "wirth_noneffective")
        return "Non-effective dissipation (limsup t b(t) < 1/2): solutions behave like\n"
               "1/beta(t) times free waves, beta(t) = exp(int_0^t b). The energy decays\n"
               "like beta(t)^-2 (for b = mu/(1+t): exponent 2 mu in the clock 1+t) and\n"
               "beta^2 E(t) converges to a positive limit. An oscillating component\n"
               "sigma(t) = mu(t) sin(t^alpha) on top of mu(t) does not change the rates.\n"
               "Scenarios: noneffective_mu03, modulated_mu06.";
    if (theorem_id == "hirosawa_nakazawa")
        return "Over-damping: for b = mu/(1+t) with mu > 1 the sharp energy bound saturates\n"
               "at exponent 2, and t^2 E(t) -> 0 as t -> infinity; no positive limit\n"
               "survives, which distinguishes over-damping from the effective range.\n"
               "Example: b = 2/(1+t), where t^2 E(10^4) falls well below t^2 E(10^2).\n"
               "Scenario: overdamping_mu2.";
    if (theorem_id == "wirth_effective")
        return "Effective dissipation (t b(t) -> infinity, b eventually decreasing):\n"
               "heat-like decay n/2 (1/p - 1/q) plus 1/2 per spatial derivative and 1 for\n"
               "u_t, measured in the clock 1 + int_0^t ds/b(s).\n"
               "Scenario: effective_power05.";
    if (theorem_id == "wirth_periodic")
        return "Positive periodic dissipation: the effective rates n/2 (1/p - 1/q) hold in\n"
               "the plain clock 1+t; the periodic oscillation only moves constants.\n"
               "Scenario: diffusion_periodic exercises the same damping family.";
    if (theorem_id == "matsumura")
        return "Constant dissipation 2b = 1: with L^1 and L^2 data,\n"
               "||d_t^k D^alpha u|| decays like (1+t)^-(|alpha|/2 + k + n/4) in L^2 (n/2\n"
               "for L^infinity). For n = 3 the field itself decays at rate 3/4.\n"
               "Scenario: matsumura_2b1.";
    if (theorem_id == "nishihara_diffusion")
        return "Three-term asymptotics for 2b = 1, n = 3: u(t) minus the heat flow\n"
               "w_t = Laplacian w (data u1 + u2) minus the damped free wave e^{-t/2} v\n"
               "decays one full order faster than u itself (rate 3/2 (1/p - 1/q) + 1).\n"
               "Scenario: diffusion_const (three-term comparison available via\n"
               "include_free_wave).";
    if (theorem_id == "wirth_diffusion")
        return "Diffusion phenomenon: for effective dissipation the L^2 difference between\n"
               "u and the heat surrogate w_t = alpha Laplacian w with data u1 + beta u2\n"
               "gains one order of decay over ||u||_L2 . The surrogate constants (alpha,\n"
               "beta) come from the small-frequency Floquet ladder when b is periodic.\n"
               "Scenarios: diffusion_const, diffusion_periodic, estimator_constant.";
    throw std::invalid_argument("unknown theorem id '" + theorem_id + "'");
}

}  // namespace wavelab::catalog
