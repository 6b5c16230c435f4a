#include "wavelab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "wavelab/asymptotics.hpp"
#include "wavelab/floquet.hpp"
#include "wavelab/rates.hpp"
#include "wavelab/spectral.hpp"

namespace wavelab::scenario {

using nlohmann::json;
using coeffs::CoefficientProfile;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument(where + ": " + what);
}

const json& field(const json& j, const std::string& key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) fail(where, "missing field '" + key + "'");
    return *it;
}

double num(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

std::string str(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

double opt_num(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    return num(j.at(key), key);
}

std::string opt_str(const json& j, const std::string& key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    return str(j.at(key), key);
}

// q may be the string "inf"
double parse_q(const json& j, const std::string& where) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
        fail(where, "expected a number or \"inf\"");
    }
    return num(j, where);
}

spectral::Quantity parse_quantity(const std::string& s, const std::string& where) {
    if (s == "field") return spectral::Quantity::field;
    if (s == "gradient") return spectral::Quantity::gradient;
    if (s == "velocity") return spectral::Quantity::velocity;
    fail(where, "unknown quantity '" + s + "'");
}

std::optional<CoefficientSpec> parse_coefficient(const json& equation, const std::string& key) {
    if (!equation.contains(key)) return std::nullopt;
    const std::string where = "equation." + key;
    const json& c = equation.at(key);
    if (!c.is_object()) fail(where, "expected an object");
    CoefficientSpec spec;
    spec.family = str(field(c, "family", where), where + ".family");
    if (c.contains("params")) {
        const json& p = c.at("params");
        if (!p.is_object()) fail(where + ".params", "expected an object");
        for (const auto& [k, v] : p.items()) spec.params[k] = num(v, where + ".params." + k);
    }
    try {
        CoefficientProfile::from_config(spec.family, spec.params);
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    return spec;
}

CoefficientProfile make_profile(const CoefficientSpec& spec) {
    return CoefficientProfile::from_config(spec.family, spec.params);
}

bool has_period(const std::optional<CoefficientSpec>& spec) {
    return spec && make_profile(*spec).period().has_value();
}

// trace names each analysis type contributes, for verify cross-checks
std::vector<std::string> produced_traces(const Scenario::Analysis& a) {
    if (a.type == "energy") return {"energy"};
    if (a.type == "dispersive") return {"dispersive"};
    if (a.type == "diffusion") return {"deficit", "l2_field"};
    if (a.type == "floquet" && a.options.contains("demo")) return {"growth"};
    return {};
}

void validate(const Scenario& sc) {
    if (sc.name.empty()) fail("name", "must be non-empty");
    if (sc.dimension < 1 || sc.dimension > 3) fail("dimension", "must be 1, 2 or 3");
    if (!(sc.freq_min > 0.0 && sc.freq_min < sc.freq_max))
        fail("frequency_grid", "need 0 < min < max");
    if (sc.freq_count < 8) fail("frequency_grid.count", "need at least 8 nodes");
    if (sc.clustering != "log" && sc.clustering != "uniform")
        fail("frequency_grid.clustering", "expected \"log\" or \"uniform\"");
    if (!(sc.t_max > 0.0)) fail("time_grid.t_max", "must be positive");
    if (sc.time_samples < 8) fail("time_grid.samples", "need at least 8 samples");
    if (!(sc.t_min > 0.0 && sc.t_max >= 100.0 * sc.t_min))
        fail("time_grid", "t_max must be at least 100x the first output time");
    if (!(sc.tol >= 1e-13 && sc.tol <= 1e-4)) fail("tol", "must lie in [1e-13, 1e-4]");

    std::set<std::string> traces;
    for (std::size_t i = 0; i < sc.analyses.size(); ++i) {
        const auto& a = sc.analyses[i];
        const std::string where = "analyses[" + std::to_string(i) + "]";
        const json& o = a.options;
        if (a.type == "energy") {
            const auto kind = opt_str(o, "kind", "plain");
            if (kind != "plain" && kind != "adapted")
                fail(where + ".kind", "expected \"plain\" or \"adapted\"");
        } else if (a.type == "dispersive") {
            const double p = opt_num(o, "p", 2.0);
            const double q = o.contains("q") ? parse_q(o.at("q"), where + ".q") : 2.0;
            if (!(p >= 1.0 && p <= 2.0)) fail(where + ".p", "need p in [1, 2]");
            if (!(q >= 2.0)) fail(where + ".q", "need q >= 2 (or \"inf\")");
            const auto quantity =
                parse_quantity(opt_str(o, "quantity", "field"), where + ".quantity");
            if (std::isinf(q)) {
                if (sc.dimension == 2)
                    fail(where, "sup-norm synthesis covers dimensions 1 and 3 only");
                if (quantity == spectral::Quantity::gradient)
                    fail(where + ".quantity", "gradient has no pointwise synthesis");
            }
        } else if (a.type == "floquet") {
            if (!o.contains("lambda_max") || !(num(o.at("lambda_max"), where) > 0.0))
                fail(where + ".lambda_max", "required and must be positive");
            if (!has_period(sc.speed) && !has_period(sc.damping) && !has_period(sc.mass))
                fail(where, "floquet analysis requires a periodic coefficient");
            if (o.contains("demo")) {
                const json& d = o.at("demo");
                if (!(opt_num(d, "horizon", 0.0) > 0.0))
                    fail(where + ".demo.horizon", "required and must be positive");
            }
        } else if (a.type == "diffusion") {
            if (!sc.damping) fail(where, "diffusion requires equation.damping");
            const auto mode = opt_str(o, "mode", "fixed");
            if (mode != "fixed" && mode != "estimated")
                fail(where + ".mode", "expected \"fixed\" or \"estimated\"");
        } else if (a.type == "liouville") {
            if (!sc.speed) fail(where, "liouville requires equation.speed as the shape");
            if (!(opt_num(o, "horizon", 100.0) > 1.0))
                fail(where + ".horizon", "must exceed 1");
        } else if (a.type == "classify" || a.type == "scattering" || a.type == "estimate" ||
                   a.type == "overdamping") {
            if (!sc.damping) fail(where, a.type + " requires equation.damping");
        } else if (a.type == "stabilisation") {
            if (!sc.speed) fail(where, "stabilisation requires equation.speed");
            if (!o.contains("limit") || !(num(o.at("limit"), where) > 0.0))
                fail(where + ".limit", "required and must be positive");
        } else {
            fail(where + ".type", "unknown analysis type '" + a.type + "'");
        }
        for (const auto& t : produced_traces(a)) traces.insert(t);
    }

    for (std::size_t i = 0; i < sc.verifications.size(); ++i) {
        const auto& v = sc.verifications[i];
        const std::string where = "verify[" + std::to_string(i) + "]";
        rates::TheoremId id;
        try {
            id = rates::theorem_from_name(v.theorem_id);
        } catch (const std::exception& e) {
            fail(where + ".theorem_id", e.what());
        }
        if (!(v.tolerance > 0.0)) fail(where + ".tolerance", "must be positive");
        if (!traces.count(v.trace))
            fail(where + ".trace", "no requested analysis produces trace '" + v.trace + "'");
        rates::PredictRequest req;
        req.n = sc.dimension;
        req.p = v.p;
        req.q = v.q;
        req.k = v.k;
        req.alpha_order = v.alpha_order;
        req.quantity = parse_quantity(v.quantity, where + ".quantity");
        rates::RatePrediction pred;
        try {
            pred = rates::predict(id, req);
        } catch (const std::exception& e) {
            fail(where, e.what());
        }
        using CK = rates::ClockFunction::Kind;
        if (pred.clock_kind == CK::shape_primitive && !sc.speed)
            fail(where, "theorem clock needs equation.speed");
        if ((pred.clock_kind == CK::reciprocal_damping ||
             pred.clock_kind == CK::damping_exponential) &&
            !sc.damping)
            fail(where, "theorem clock needs equation.damping");
    }
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json finite_or_string(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

void write_trace_csv(const std::filesystem::path& path, const spectral::EnergyTrace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << "t,value\n";
    for (std::size_t k = 0; k < trace.times.size(); ++k)
        out << format_double(trace.times[k]) << ',' << format_double(trace.values[k]) << '\n';
}

// Shared state while executing one scenario's analyses.
struct RunContext {
    const Scenario& sc;
    double tol;
    int threads;
    std::optional<CoefficientProfile> speed, damping, mass;
    spectral::SpectralData data;
    std::vector<double> times;
    std::vector<modeode::ModeTrajectory> trajectories;  // empty until needed
    std::map<std::string, spectral::EnergyTrace> traces;

    const std::vector<modeode::ModeTrajectory>& ensemble() {
        if (trajectories.empty()) {
            modeode::ModeParams base;
            if (speed) base.speed = *speed;
            base.damping = damping;
            base.mass = mass;
            trajectories = spectral::integrate_ensemble(data, base, times, tol, threads);
        }
        return trajectories;
    }

    const spectral::EnergyTrace& energy_plain() {
        auto it = traces.find("_energy_plain");
        if (it != traces.end()) return it->second;
        auto trace = spectral::plancherel_energy(data, ensemble(), speed ? &*speed : nullptr,
                                                 spectral::TraceKind::plain);
        return traces.emplace("_energy_plain", std::move(trace)).first->second;
    }
};

std::size_t nearest_time_index(const std::vector<double>& times, double t) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < times.size(); ++k)
        if (std::abs(times[k] - t) < std::abs(times[best] - t)) best = k;
    return best;
}

json run_energy(RunContext& ctx, const json& o) {
    const auto kind = opt_str(o, "kind", "plain") == "adapted" ? spectral::TraceKind::adapted
                                                               : spectral::TraceKind::plain;
    auto trace = spectral::plancherel_energy(ctx.data, ctx.ensemble(),
                                             ctx.speed ? &*ctx.speed : nullptr, kind);
    json detail;
    const double e0 = trace.values.front();
    double lo = 1.0, hi = 1.0, drift = 0.0;
    for (double v : trace.values) {
        const double r = v / e0;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        drift = std::max(drift, std::abs(r - 1.0));
    }
    detail["e0"] = e0;
    detail["ratio_lower"] = lo;
    detail["ratio_upper"] = hi;
    detail["max_drift"] = drift;
    const double decades = opt_num(o, "fit_decades", 1.0);
    const std::pair<double, double> window{ctx.sc.t_max / std::pow(10.0, decades), ctx.sc.t_max};
    std::size_t in_window = 0;
    for (double t : trace.times)
        if (t >= window.first && t <= window.second) ++in_window;
    if (in_window >= 10) {
        auto fit = rates::fit_power_decay(trace, rates::ClockFunction::poly(), window);
        detail["drift_exponent"] = fit.exponent;
        detail["drift_r_squared"] = fit.r_squared;
        detail["fit_window"] = {window.first, window.second};
    }
    ctx.traces["energy"] = std::move(trace);
    return detail;
}

json run_dispersive(RunContext& ctx, const json& o) {
    const double p = opt_num(o, "p", 2.0);
    const double q = o.contains("q") ? parse_q(o.at("q"), "dispersive.q") : 2.0;
    const auto quantity = parse_quantity(opt_str(o, "quantity", "field"), "dispersive.quantity");
    json detail;
    detail["p"] = p;
    detail["q"] = std::isinf(q) ? json("inf") : json(q);
    detail["quantity"] = opt_str(o, "quantity", "field");

    spectral::EnergyTrace trace;
    if (q == 2.0) {
        trace = spectral::l2_norm_trace(ctx.data, ctx.ensemble(), quantity);
    } else {
        const auto& trajs = ctx.ensemble();
        trace.times = ctx.times;
        trace.values.resize(ctx.times.size());
        const double a_max = ctx.speed ? ctx.speed->sup_value(0.0, ctx.sc.t_max) : 1.0;
        const double width = 6.0 * std::max(ctx.sc.u1_width, ctx.sc.u2_width) + 10.0;
        const int points = static_cast<int>(opt_num(o, "grid_points", 600));
        bool under_resolved = false;
        for (std::size_t k = 0; k < ctx.times.size(); ++k) {
            const double center = a_max * ctx.times[k];
            // with damping the field need not peak on the light cone; keep the origin
            const double lo = ctx.damping ? 0.0 : std::max(0.0, center - width);
            const double hi = center + width;
            std::vector<double> grid(points);
            for (int i = 0; i < points; ++i)
                grid[i] = lo + (hi - lo) * i / double(points - 1);
            auto amps = spectral::states_at(trajs, k, quantity);
            auto snap = ctx.sc.dimension == 3
                            ? spectral::synthesize_radial3d(ctx.data, amps, grid, ctx.times[k])
                            : spectral::synthesize_1d(ctx.data, amps, grid, ctx.times[k]);
            under_resolved = under_resolved || snap.under_resolved;
            trace.values[k] = spectral::lq_norm(snap, q, ctx.sc.dimension);
        }
        detail["under_resolved"] = under_resolved;
    }
    ctx.traces["dispersive"] = std::move(trace);
    return detail;
}

json interval_json(const floquet::InstabilityInterval& iv) {
    return {{"lower", iv.lower},
            {"upper", iv.upper},
            {"max_growth_rate", iv.max_growth_rate},
            {"truncated_at_scan_end", iv.truncated_at_scan_end}};
}

json run_floquet(RunContext& ctx, const json& o, const std::filesystem::path& out_dir,
                 std::vector<std::string>& outputs) {
    floquet::HillProblem problem;
    if (ctx.speed) problem.speed = *ctx.speed;
    problem.damping = ctx.damping;
    problem.mass = ctx.mass;
    const double lambda_max = num(o.at("lambda_max"), "floquet.lambda_max");
    const int scan_points = static_cast<int>(opt_num(o, "scan_points", 400));
    const double tol_f = opt_num(o, "tol", 1e-12);

    auto scan = floquet::discriminant_scan(problem, lambda_max, scan_points, tol_f);
    {
        std::ofstream out(out_dir / "scan_discriminant.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot open scan_discriminant.csv");
        out << "lambda,discriminant,det,growth_rate\n";
        for (const auto& s : scan)
            out << format_double(s.lambda_spec) << ',' << format_double(s.discriminant) << ','
                << format_double(s.det_monodromy) << ',' << format_double(s.growth_rate) << '\n';
        outputs.push_back("scan_discriminant.csv");
    }
    double max_excess = -std::numeric_limits<double>::infinity();
    for (const auto& s : scan) {
        const double ref = std::sqrt(std::max(s.det_monodromy, 0.0));
        max_excess = std::max(max_excess, std::abs(s.discriminant) - 2.0 * ref);
    }
    auto intervals = floquet::instability_intervals(problem, lambda_max, scan_points, tol_f);
    json detail;
    detail["lambda_max"] = lambda_max;
    detail["scan_points"] = scan_points;
    detail["max_discriminant_excess"] = max_excess;
    detail["n_intervals"] = intervals.size();
    detail["intervals"] = json::array();
    for (const auto& iv : intervals) detail["intervals"].push_back(interval_json(iv));

    if (o.contains("demo")) {
        if (intervals.empty())
            throw std::runtime_error("floquet demo: no instability interval found");
        const auto& d = o.at("demo");
        std::size_t pick = 0;
        for (std::size_t i = 1; i < intervals.size(); ++i)
            if (intervals[i].max_growth_rate > intervals[pick].max_growth_rate) pick = i;
        auto demo = floquet::yagdjian_demo(
            problem, intervals[pick], num(d.at("horizon"), "demo.horizon"),
            static_cast<int>(opt_num(d, "modes", 32)), opt_num(d, "amplitude", 1.0),
            opt_num(d, "diagnostic_time", 0.0), opt_num(d, "tol", 1e-10));
        json dj;
        dj["interval"] = interval_json(intervals[pick]);
        dj["fitted_rate"] = demo.fitted_rate;
        dj["expected_rate"] = demo.expected_rate;
        dj["relative_rate_error"] =
            std::abs(demo.fitted_rate - demo.expected_rate) / demo.expected_rate;
        dj["log_energy_ratio"] = demo.log_energy_ratio;
        dj["diagnostic_time"] = demo.diagnostic_time;
        detail["demo"] = dj;
        ctx.traces["growth"] = std::move(demo.trace);
    }
    return detail;
}

json run_diffusion(RunContext& ctx, const json& o) {
    json detail;
    asymptotics::HeatSurrogate s{opt_num(o, "alpha", 1.0), opt_num(o, "beta", 1.0)};
    if (opt_str(o, "mode", "fixed") == "estimated") {
        auto est = asymptotics::estimate_alpha_beta(*ctx.damping, opt_num(o, "lambda0", 0.1),
                                                    static_cast<int>(opt_num(o, "rungs", 9)));
        if (!est.valid) throw std::runtime_error("diffusion: (alpha, beta) estimation failed");
        s = {est.alpha_hat, est.beta_hat};
        detail["alpha_residual"] = est.alpha_residual;
        detail["beta_residual"] = est.beta_residual;
    }
    detail["alpha"] = s.alpha;
    detail["beta"] = s.beta;

    auto u_l2 = spectral::l2_norm_trace(ctx.data, ctx.ensemble(), spectral::Quantity::field);
    auto deficit = asymptotics::diffusion_deficit(ctx.data, ctx.ensemble(), s,
                                                 o.value("include_free_wave", false));
    const auto window = rates::last_decade(u_l2);
    const auto clock = rates::ClockFunction::poly();
    const auto u_fit = rates::fit_power_decay(u_l2, clock, window);
    const auto d_fit = rates::fit_power_decay(deficit, clock, window);
    detail["u_exponent"] = u_fit.exponent;
    detail["deficit_exponent"] = d_fit.exponent;
    detail["gain"] = d_fit.exponent - u_fit.exponent;

    const double perturb = opt_num(o, "alpha_perturbation", 1.2);
    auto wrong = asymptotics::diffusion_deficit(ctx.data, ctx.ensemble(),
                                               {s.alpha * perturb, s.beta});
    const auto w_fit = rates::fit_power_decay(wrong, clock, window);
    detail["alpha_perturbation"] = perturb;
    detail["gain_perturbed"] = w_fit.exponent - u_fit.exponent;

    ctx.traces["l2_field"] = std::move(u_l2);
    ctx.traces["deficit"] = std::move(deficit);
    return detail;
}

json run_liouville(RunContext& ctx, const json& o) {
    const auto& shape = *ctx.speed;
    auto derived = asymptotics::liouville_damping(shape);
    json detail;
    const double t_check = opt_num(o, "t_check", 1e4);
    const double product = 2.0 * derived.eval(t_check) * (1.0 + t_check);
    detail["t_check"] = t_check;
    detail["damping_product"] = product;
    if (shape.family() == coeffs::Family::power_shape) {
        const double l = shape.params().at("l");
        detail["expected_limit"] = l / (l + 1.0);
        detail["limit_error"] = std::abs(product - l / (l + 1.0));
    }
    const double horizon = opt_num(o, "horizon", 100.0);
    const double vtol = opt_num(o, "tol", 1e-8);
    detail["horizon"] = horizon;
    detail["tol"] = vtol;
    detail["residual"] = asymptotics::liouville_verify(
        shape, opt_num(o, "lambda_spec", 1.0), {opt_num(o, "init_v", 1.0), 0.0}, horizon, vtol);
    return detail;
}

json run_classify(RunContext& ctx, const json& o) {
    auto grid = coeffs::geometric_grid(1.0, opt_num(o, "t_max", 1e4),
                                       static_cast<std::size_t>(opt_num(o, "points", 200)));
    auto rep = coeffs::classify_dissipation(*ctx.damping, grid);
    json detail;
    detail["classification"] = coeffs::dissipation_class_name(rep.classification);
    if (rep.detail.fitted_exponent)
        detail["fitted_exponent"] = finite_or_string(*rep.detail.fitted_exponent);
    return detail;
}

json run_stabilisation(RunContext& ctx, const json& o) {
    auto grid = coeffs::geometric_grid(1.0, opt_num(o, "t_max", 1e4),
                                       static_cast<std::size_t>(opt_num(o, "points", 160)));
    auto rep = coeffs::stabilisation_measure(*ctx.speed, num(o.at("limit"), "stabilisation.limit"),
                                             nullptr, grid);
    json detail;
    detail["limit"] = o.at("limit");
    detail["verdict"] = coeffs::verdict_name(rep.verdict);
    if (rep.fitted_exponent) detail["fitted_exponent"] = finite_or_string(*rep.fitted_exponent);
    return detail;
}

json run_scattering(RunContext& ctx, const json&) {
    const auto& trace = ctx.energy_plain();
    auto lim = rates::scattering_limit(trace, rates::ClockFunction::damping_exponential(*ctx.damping));
    json detail;
    detail["limit_estimate"] = lim.limit_estimate;
    detail["converged"] = lim.converged;
    detail["e0"] = trace.values.front();
    detail["limit_positive"] = lim.limit_estimate > 1e-6 * trace.values.front();
    return detail;
}

json run_overdamping(RunContext& ctx, const json& o) {
    const auto& trace = ctx.energy_plain();
    const std::size_t early = nearest_time_index(trace.times, opt_num(o, "t_early", ctx.sc.t_max / 100.0));
    const std::size_t late = trace.times.size() - 1;
    const double w_early = trace.times[early] * trace.times[early] * trace.values[early];
    const double w_late = trace.times[late] * trace.times[late] * trace.values[late];
    json detail;
    detail["t_early"] = trace.times[early];
    detail["t_late"] = trace.times[late];
    detail["t2e_early"] = w_early;
    detail["t2e_late"] = w_late;
    detail["ratio"] = w_late / w_early;
    return detail;
}

json run_estimate(RunContext& ctx, const json& o) {
    auto est = asymptotics::estimate_alpha_beta(*ctx.damping, opt_num(o, "lambda0", 0.1),
                                                static_cast<int>(opt_num(o, "rungs", 9)));
    json detail;
    detail["alpha_hat"] = est.alpha_hat;
    detail["beta_hat"] = est.beta_hat;
    detail["valid"] = est.valid;
    detail["alpha_residual"] = est.alpha_residual;
    detail["beta_residual"] = est.beta_residual;
    return detail;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("scenario: expected a JSON object");

    Scenario sc;
    sc.name = str(field(j, "name", "scenario"), "name");
    sc.dimension = static_cast<int>(opt_num(j, "dimension", 3));

    if (j.contains("equation")) {
        const json& eq = j.at("equation");
        if (!eq.is_object()) fail("equation", "expected an object");
        sc.speed = parse_coefficient(eq, "speed");
        sc.damping = parse_coefficient(eq, "damping");
        sc.mass = parse_coefficient(eq, "mass");
    }

    if (j.contains("data")) {
        const json& d = j.at("data");
        const auto family = opt_str(d, "family", "gaussian");
        if (family != "gaussian") fail("data.family", "only \"gaussian\" data is supported");
        if (d.contains("u1")) {
            sc.u1_width = opt_num(d.at("u1"), "width", 1.0);
            sc.u1_amplitude = opt_num(d.at("u1"), "amplitude", 1.0);
        }
        if (d.contains("u2")) {
            sc.u2_width = opt_num(d.at("u2"), "width", 1.0);
            sc.u2_amplitude = opt_num(d.at("u2"), "amplitude", 0.0);
        }
    }

    if (j.contains("frequency_grid")) {
        const json& g = j.at("frequency_grid");
        sc.freq_min = opt_num(g, "min", sc.freq_min);
        sc.freq_max = opt_num(g, "max", sc.freq_max);
        sc.freq_count = static_cast<int>(opt_num(g, "count", sc.freq_count));
        sc.clustering = opt_str(g, "clustering", sc.clustering);
    }

    if (j.contains("time_grid")) {
        const json& g = j.at("time_grid");
        sc.t_max = opt_num(g, "t_max", sc.t_max);
        sc.time_samples = static_cast<int>(opt_num(g, "samples", sc.time_samples));
        sc.t_min = opt_num(g, "t_min", 0.0);
        const auto spacing = opt_str(g, "spacing", "geometric");
        if (spacing != "geometric") fail("time_grid.spacing", "only \"geometric\" is supported");
    }
    if (sc.t_min <= 0.0) sc.t_min = sc.t_max / 1000.0;
    sc.tol = opt_num(j, "tol", 1e-10);

    if (j.contains("analyses")) {
        const json& list = j.at("analyses");
        if (!list.is_array()) fail("analyses", "expected an array");
        for (const auto& a : list) {
            Scenario::Analysis spec;
            spec.type = str(field(a, "type", "analyses[]"), "analyses[].type");
            spec.options = a;
            sc.analyses.push_back(std::move(spec));
        }
    }

    if (j.contains("verify")) {
        const json& list = j.at("verify");
        if (!list.is_array()) fail("verify", "expected an array");
        for (const auto& v : list) {
            Scenario::Verify spec;
            spec.theorem_id = str(field(v, "theorem_id", "verify[]"), "verify[].theorem_id");
            spec.tolerance = opt_num(v, "tolerance", 0.05);
            spec.trace = opt_str(v, "trace", "energy");
            spec.p = opt_num(v, "p", 2.0);
            spec.q = v.contains("q") ? parse_q(v.at("q"), "verify[].q") : 2.0;
            spec.k = static_cast<int>(opt_num(v, "k", 0));
            spec.alpha_order = static_cast<int>(opt_num(v, "alpha_order", 0));
            spec.quantity = opt_str(v, "quantity", "field");
            if (v.contains("expected_exponent"))
                spec.expected_exponent = num(v.at("expected_exponent"), "verify[].expected_exponent");
            sc.verifications.push_back(std::move(spec));
        }
    }

    validate(sc);
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

RunReport run(const Scenario& sc, const std::string& out_dir, int threads, double tol_override) {
    if (threads < 1) throw std::invalid_argument("run: threads must be >= 1");
    RunContext ctx{sc, sc.tol, threads, {}, {}, {}, {}, {}, {}, {}};
    if (tol_override > 0.0) {
        if (!(tol_override >= 1e-13 && tol_override <= 1e-4))
            throw std::invalid_argument("run: --tol-override must lie in [1e-13, 1e-4]");
        ctx.tol = tol_override;
    }
    if (sc.speed) ctx.speed = make_profile(*sc.speed);
    if (sc.damping) ctx.damping = make_profile(*sc.damping);
    if (sc.mass) ctx.mass = make_profile(*sc.mass);

    spectral::FrequencyGrid grid;
    grid.rho_min = sc.freq_min;
    grid.rho_max = sc.freq_max;
    grid.count = sc.freq_count;
    grid.spacing = sc.clustering == "uniform" ? spectral::FrequencyGrid::Spacing::uniform
                                              : spectral::FrequencyGrid::Spacing::log_trapezoid;
    ctx.data = spectral::gaussian_data(
        sc.dimension, {sc.u1_width, sc.u1_amplitude, sc.u2_width, sc.u2_amplitude}, grid);
    ctx.times = coeffs::geometric_grid(sc.t_min, sc.t_max, sc.time_samples);
    ctx.times.insert(ctx.times.begin(), 0.0);

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    RunReport result;
    json& report = result.report;
    report["schema_version"] = 1;
    report["scenario"] = sc.name;
    report["dimension"] = sc.dimension;
    report["frequency_nodes"] = sc.freq_count;
    report["time_samples"] = ctx.times.size();
    report["tolerance"] = ctx.tol;
    report["analyses"] = json::array();
    report["verifications"] = json::array();
    std::vector<std::string> outputs;

    for (const auto& a : sc.analyses) {
        json entry;
        entry["type"] = a.type;
        try {
            json detail;
            if (a.type == "energy") detail = run_energy(ctx, a.options);
            else if (a.type == "dispersive") detail = run_dispersive(ctx, a.options);
            else if (a.type == "floquet") detail = run_floquet(ctx, a.options, dir, outputs);
            else if (a.type == "diffusion") detail = run_diffusion(ctx, a.options);
            else if (a.type == "liouville") detail = run_liouville(ctx, a.options);
            else if (a.type == "classify") detail = run_classify(ctx, a.options);
            else if (a.type == "stabilisation") detail = run_stabilisation(ctx, a.options);
            else if (a.type == "scattering") detail = run_scattering(ctx, a.options);
            else if (a.type == "overdamping") detail = run_overdamping(ctx, a.options);
            else if (a.type == "estimate") detail = run_estimate(ctx, a.options);
            entry["status"] = "ok";
            entry["detail"] = detail;
        } catch (const std::exception& e) {
            entry["status"] = "error";
            entry["message"] = e.what();
            result.numeric_failure = true;
        }
        report["analyses"].push_back(entry);
    }

    for (const auto& v : sc.verifications) {
        json entry;
        entry["theorem_id"] = v.theorem_id;
        entry["trace"] = v.trace;
        entry["tolerance"] = v.tolerance;
        try {
            rates::PredictRequest req;
            req.n = sc.dimension;
            req.p = v.p;
            req.q = v.q;
            req.k = v.k;
            req.alpha_order = v.alpha_order;
            req.quantity = parse_quantity(v.quantity, "verify.quantity");
            auto pred = rates::predict(rates::theorem_from_name(v.theorem_id), req);
            if (v.expected_exponent) pred.exponent = *v.expected_exponent;
            rates::ClockFunction clock = rates::ClockFunction::poly();
            using CK = rates::ClockFunction::Kind;
            if (pred.clock_kind == CK::shape_primitive)
                clock = rates::ClockFunction::shape_primitive(*ctx.speed);
            else if (pred.clock_kind == CK::reciprocal_damping)
                clock = rates::ClockFunction::reciprocal_damping(*ctx.damping);
            else if (pred.clock_kind == CK::damping_exponential)
                clock = rates::ClockFunction::damping_exponential(*ctx.damping);
            auto rep = rates::verify(ctx.traces.at(v.trace), pred, clock, v.tolerance);
            entry["clock"] = clock.describe();
            entry["predicted"] = rep.predicted;
            entry["fitted"] = rep.fitted.exponent;
            entry["r_squared"] = rep.fitted.r_squared;
            entry["window"] = {rep.fitted.window.first, rep.fitted.window.second};
            entry["pass"] = rep.pass;
            if (!rep.pass) result.verification_failed = true;
        } catch (const std::exception& e) {
            entry["pass"] = false;
            entry["message"] = e.what();
            result.verification_failed = true;
        }
        report["verifications"].push_back(entry);
    }

    for (const auto& [name, trace] : ctx.traces) {
        if (name.front() == '_') continue;  // internal caches
        const std::string file = "trace_" + name + ".csv";
        write_trace_csv(dir / file, trace);
        outputs.push_back(file);
    }
    std::sort(outputs.begin(), outputs.end());
    outputs.push_back("report.json");
    report["outputs"] = outputs;

    std::ofstream out(dir / "report.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot open report.json");
    out << report.dump(2) << '\n';
    return result;
}

}  // namespace wavelab::scenario
