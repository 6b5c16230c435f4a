#include "wavelab/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wavelab/fitting.hpp"
#include "wavelab/quadrature.hpp"

namespace wavelab::coeffs {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double require(const std::map<std::string, double>& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw std::invalid_argument("missing parameter '" + key + "'");
    return it->second;
}

// psi(s) = kappa * exp(-1/(s(1-s))) on (0,1). Below s(1-s) ~ 1/700 the value
// underflows to zero anyway, so clamp the support slightly inward.
constexpr double kBumpEdge = 2e-3;

double bump_value(double s) {
    if (s <= kBumpEdge || s >= 1.0 - kBumpEdge) return 0.0;
    return CoefficientProfile::kBumpKappa * std::exp(-1.0 / (s * (1.0 - s)));
}

Jet bump_jet(const Jet& s) {
    if (s.value() <= kBumpEdge || s.value() >= 1.0 - kBumpEdge) return Jet{};
    return CoefficientProfile::kBumpKappa * exp(-(Jet::constant(1.0) / (s * (1.0 - s))));
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::constant: return "constant";
        case Family::log_sine: return "log_sine";
        case Family::sine_power: return "sine_power";
        case Family::bump_sum: return "bump_sum";
        case Family::power_shape: return "power_shape";
        case Family::inverse_damping: return "inverse_damping";
        case Family::power_damping: return "power_damping";
        case Family::periodic_damping: return "periodic_damping";
        case Family::modulated_damping: return "modulated_damping";
        case Family::periodic_speed: return "periodic_speed";
    }
    return "?";
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::satisfied: return "satisfied";
        case Verdict::violated: return "violated";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

std::string dissipation_class_name(DissipationClass c) {
    switch (c) {
        case DissipationClass::non_effective: return "non_effective";
        case DissipationClass::effective: return "effective";
        case DissipationClass::over_damping: return "over_damping";
        case DissipationClass::inconclusive: return "inconclusive";
    }
    return "?";
}

CoefficientProfile::CoefficientProfile(Family f, std::map<std::string, double> params,
                                       std::optional<double> period, int max_order)
    : family_(f), params_(std::move(params)), period_(period), max_order_(max_order) {
    switch (family_) {
        case Family::constant: p_[0] = require(params_, "c"); break;
        case Family::log_sine:
            p_[0] = require(params_, "c0");
            p_[1] = require(params_, "c1");
            break;
        case Family::sine_power:
            p_[0] = require(params_, "c0");
            p_[1] = require(params_, "c1");
            p_[2] = require(params_, "alpha");
            if (p_[2] <= 0.0) throw std::invalid_argument("sine_power: alpha must be positive");
            break;
        case Family::bump_sum: {
            p_[0] = require(params_, "p");
            p_[1] = require(params_, "q");
            const int n = static_cast<int>(require(params_, "bumps"));
            if (n < 1) throw std::invalid_argument("bump_sum: need at least one bump");
            for (int j = 1; j <= n; ++j) {
                BumpSpec s;
                s.t0 = std::pow(2.0, j);
                s.delta = std::pow(2.0, j * p_[1]);
                s.eta = std::pow(2.0, j * (p_[1] - p_[0]));
                bumps_.push_back(s);
            }
            break;
        }
        case Family::power_shape:
            p_[0] = require(params_, "l");
            if (p_[0] <= -1.0) throw std::invalid_argument("power_shape: l must exceed -1");
            break;
        case Family::inverse_damping:
            p_[0] = require(params_, "mu");
            if (p_[0] < 0.0) throw std::invalid_argument("inverse_damping: mu must be nonnegative");
            break;
        case Family::power_damping:
            p_[0] = require(params_, "gamma");
            if (p_[0] <= -1.0 || p_[0] >= 1.0)
                throw std::invalid_argument("power_damping: gamma must lie in (-1,1)");
            break;
        case Family::periodic_damping:
            p_[0] = require(params_, "b0");
            p_[1] = require(params_, "b1");
            p_[2] = require(params_, "T");
            if (p_[0] <= std::abs(p_[1]))
                throw std::invalid_argument("periodic_damping: need b0 > |b1|");
            if (p_[2] <= 0.0) throw std::invalid_argument("periodic_damping: period must be positive");
            break;
        case Family::modulated_damping:
            p_[0] = require(params_, "mu0");
            p_[1] = require(params_, "alpha");
            if (p_[0] < 0.0) throw std::invalid_argument("modulated_damping: mu0 must be nonnegative");
            if (p_[1] <= 0.0 || p_[1] >= 1.0)
                throw std::invalid_argument("modulated_damping: alpha must lie in (0,1)");
            break;
        case Family::periodic_speed:
            p_[0] = require(params_, "c0");
            p_[1] = require(params_, "eps");
            p_[2] = require(params_, "T");
            if (p_[0] * p_[0] <= std::abs(p_[1]))
                throw std::invalid_argument("periodic_speed: need c0^2 > |eps|");
            if (p_[2] <= 0.0) throw std::invalid_argument("periodic_speed: period must be positive");
            break;
    }
}

CoefficientProfile CoefficientProfile::constant(double c) {
    return CoefficientProfile(Family::constant, {{"c", c}}, std::nullopt, 4);
}
CoefficientProfile CoefficientProfile::log_sine(double c0, double c1) {
    return CoefficientProfile(Family::log_sine, {{"c0", c0}, {"c1", c1}}, std::nullopt, 4);
}
CoefficientProfile CoefficientProfile::sine_power(double c0, double c1, double alpha) {
    return CoefficientProfile(Family::sine_power, {{"c0", c0}, {"c1", c1}, {"alpha", alpha}},
                              std::nullopt, 4);
}
CoefficientProfile CoefficientProfile::bump_sum(double p, double q, int bumps) {
    return CoefficientProfile(Family::bump_sum,
                              {{"p", p}, {"q", q}, {"bumps", static_cast<double>(bumps)}},
                              std::nullopt, 4);
}
CoefficientProfile CoefficientProfile::power_shape(double l) {
    return CoefficientProfile(Family::power_shape, {{"l", l}}, std::nullopt, 4);
}
CoefficientProfile CoefficientProfile::inverse_damping(double mu) {
    return CoefficientProfile(Family::inverse_damping, {{"mu", mu}}, std::nullopt, 4);
}
CoefficientProfile CoefficientProfile::power_damping(double gamma) {
    return CoefficientProfile(Family::power_damping, {{"gamma", gamma}}, std::nullopt, 4);
}
CoefficientProfile CoefficientProfile::periodic_damping(double b0, double b1, double T) {
    return CoefficientProfile(Family::periodic_damping, {{"b0", b0}, {"b1", b1}, {"T", T}}, T, 4);
}
CoefficientProfile CoefficientProfile::modulated_damping(double mu0, double alpha) {
    return CoefficientProfile(Family::modulated_damping, {{"mu0", mu0}, {"alpha", alpha}},
                              std::nullopt, 4);
}
CoefficientProfile CoefficientProfile::periodic_speed(double c0, double eps, double T) {
    return CoefficientProfile(Family::periodic_speed, {{"c0", c0}, {"eps", eps}, {"T", T}}, T, 4);
}

CoefficientProfile CoefficientProfile::from_config(const std::string& family,
                                                   const std::map<std::string, double>& p) {
    if (family == "constant") return constant(require(p, "c"));
    if (family == "log_sine") return log_sine(require(p, "c0"), require(p, "c1"));
    if (family == "sine_power")
        return sine_power(require(p, "c0"), require(p, "c1"), require(p, "alpha"));
    if (family == "bump_sum")
        return bump_sum(require(p, "p"), require(p, "q"), static_cast<int>(require(p, "bumps")));
    if (family == "power_shape") return power_shape(require(p, "l"));
    if (family == "inverse_damping") return inverse_damping(require(p, "mu"));
    if (family == "power_damping") return power_damping(require(p, "gamma"));
    if (family == "periodic_damping")
        return periodic_damping(require(p, "b0"), require(p, "b1"), require(p, "T"));
    if (family == "modulated_damping")
        return modulated_damping(require(p, "mu0"), require(p, "alpha"));
    if (family == "periodic_speed")
        return periodic_speed(require(p, "c0"), require(p, "eps"), require(p, "T"));
    throw std::invalid_argument("unknown coefficient family '" + family + "'");
}

Jet CoefficientProfile::eval_jet(double t) const {
    const Jet tj = Jet::variable(t);
    switch (family_) {
        case Family::constant: return Jet::constant(p_[0]);
        case Family::log_sine: return p_[0] + p_[1] * sin(log(tj + kE));
        case Family::sine_power:
            if (t == 0.0 && p_[2] < 1.0) return Jet::constant(p_[0]);  // derivative blow-up at 0
            return p_[0] + p_[1] * sin(pow(tj, p_[2]));
        case Family::bump_sum: {
            Jet r = Jet::constant(1.0);
            for (const auto& b : bumps_) {
                if (t < b.t0 || t > b.t0 + b.delta) continue;
                r = r + b.eta * bump_jet((tj - b.t0) / Jet::constant(b.delta));
            }
            return r;
        }
        case Family::power_shape: return pow(tj + 1.0, p_[0]);
        case Family::inverse_damping: return Jet::constant(p_[0]) / (tj + 1.0);
        case Family::power_damping: return pow(tj + 1.0, -p_[0]);
        case Family::periodic_damping: return p_[0] + p_[1] * cos((kTwoPi / p_[2]) * tj);
        case Family::modulated_damping: {
            const Jet mu = Jet::constant(p_[0]) / (tj + 1.0);
            if (t == 0.0) return 0.5 * mu;
            return 0.5 * (mu + mu * sin(pow(tj, p_[1])));
        }
        case Family::periodic_speed:
            return sqrt(p_[0] * p_[0] + p_[1] * cos((kTwoPi / p_[2]) * tj));
    }
    throw std::logic_error("unreachable");
}

double CoefficientProfile::eval(double t, int k) const {
    if (t < 0.0) throw std::domain_error("CoefficientProfile::eval: t must be nonnegative");
    if (k < 0 || k > max_order_)
        throw std::out_of_range("CoefficientProfile::eval: derivative order exceeded");
    if (k == 0) {
        // fast paths for the value
        switch (family_) {
            case Family::constant: return p_[0];
            case Family::log_sine: return p_[0] + p_[1] * std::sin(std::log(kE + t));
            case Family::sine_power: return p_[0] + p_[1] * std::sin(std::pow(t, p_[2]));
            case Family::bump_sum: {
                double r = 1.0;
                for (const auto& b : bumps_) {
                    if (t < b.t0 || t > b.t0 + b.delta) continue;
                    r += b.eta * bump_value((t - b.t0) / b.delta);
                }
                return r;
            }
            case Family::power_shape: return std::pow(1.0 + t, p_[0]);
            case Family::inverse_damping: return p_[0] / (1.0 + t);
            case Family::power_damping: return std::pow(1.0 + t, -p_[0]);
            case Family::periodic_damping: return p_[0] + p_[1] * std::cos(kTwoPi * t / p_[2]);
            case Family::modulated_damping: {
                const double mu = p_[0] / (1.0 + t);
                return 0.5 * mu * (1.0 + std::sin(std::pow(t, p_[1])));
            }
            case Family::periodic_speed:
                return std::sqrt(p_[0] * p_[0] + p_[1] * std::cos(kTwoPi * t / p_[2]));
        }
    }
    return eval_jet(t).derivative(k);
}

double CoefficientProfile::primitive(double t) const {
    if (t < 0.0) throw std::domain_error("CoefficientProfile::primitive: t must be nonnegative");
    switch (family_) {
        case Family::constant: return p_[0] * t;
        case Family::log_sine: {
            // int sin(log(e+s)) ds = (e+s)/2 (sin log(e+s) - cos log(e+s))
            auto F = [](double u) { return 0.5 * u * (std::sin(std::log(u)) - std::cos(std::log(u))); };
            return p_[0] * t + p_[1] * (F(kE + t) - F(kE));
        }
        case Family::power_shape:
            return 1.0 + (std::pow(1.0 + t, p_[0] + 1.0) - 1.0) / (p_[0] + 1.0);
        case Family::inverse_damping: return p_[0] * std::log1p(t);
        case Family::power_damping:
            return (std::pow(1.0 + t, 1.0 - p_[0]) - 1.0) / (1.0 - p_[0]);
        case Family::periodic_damping:
            return p_[0] * t + p_[1] * p_[2] / kTwoPi * std::sin(kTwoPi * t / p_[2]);
        case Family::bump_sum: {
            double r = t;
            for (const auto& b : bumps_) {
                if (t <= b.t0) continue;
                if (t >= b.t0 + b.delta) {
                    r += 0.5 * b.eta * b.delta;  // int_0^1 psi = 1/2
                } else {
                    auto q = integrate_adaptive(
                        [&](double s) { return b.eta * bump_value((s - b.t0) / b.delta); }, b.t0, t,
                        1e-11 * std::max(1.0, b.delta));
                    r += q.value;
                }
            }
            return r;
        }
        case Family::sine_power: {
            // substitute theta = s^alpha to remove the derivative singularity at 0
            const double al = p_[2];
            auto q = integrate_adaptive(
                [&](double th) { return std::sin(th) * std::pow(th, 1.0 / al - 1.0) / al; }, 0.0,
                std::pow(t, al), 1e-10 * std::max(1.0, t));
            if (!q.converged)
                throw std::runtime_error("primitive: quadrature did not converge, achieved " +
                                         std::to_string(q.achieved_tol));
            return p_[0] * t + p_[1] * q.value;
        }
        case Family::modulated_damping: {
            const double al = p_[1];
            auto q = integrate_adaptive(
                [&](double th) {
                    return std::sin(th) * std::pow(th, 1.0 / al - 1.0) /
                           (al * (1.0 + std::pow(th, 1.0 / al)));
                },
                0.0, std::pow(t, al), 1e-10 * std::max(1.0, t));
            if (!q.converged)
                throw std::runtime_error("primitive: quadrature did not converge, achieved " +
                                         std::to_string(q.achieved_tol));
            return 0.5 * p_[0] * (std::log1p(t) + q.value);
        }
        default: {
            auto q = integrate_adaptive([&](double s) { return eval(s, 0); }, 0.0, t,
                                        1e-10 * std::max(1.0, t));
            if (!q.converged)
                throw std::runtime_error("primitive: quadrature did not converge, achieved " +
                                         std::to_string(q.achieved_tol));
            return q.value;
        }
    }
}

double CoefficientProfile::sup_value(double t0, double t1) const {
    switch (family_) {
        case Family::constant: return p_[0];
        case Family::power_shape: return std::pow(1.0 + std::max(t0, t1), p_[0] >= 0 ? p_[0] : 0.0);
        case Family::log_sine: return p_[0] + std::abs(p_[1]);
        case Family::sine_power: return p_[0] + std::abs(p_[1]);
        case Family::periodic_speed: return std::sqrt(p_[0] * p_[0] + std::abs(p_[1]));
        default: {
            double m = 0.0;
            const int n = 2048;
            for (int i = 0; i <= n; ++i) {
                const double t = t0 + (t1 - t0) * i / n;
                m = std::max(m, eval(t, 0));
            }
            return m;
        }
    }
}

std::string CoefficientProfile::describe() const {
    std::ostringstream os;
    os << family_name(family_) << "(";
    bool first = true;
    for (const auto& [k, v] : params_) {
        if (!first) os << ", ";
        os << k << "=" << v;
        first = false;
    }
    os << ")";
    return os.str();
}

std::vector<double> geometric_grid(double t0, double t1, std::size_t n) {
    if (t0 <= 0.0 || t1 <= t0 || n < 2) throw std::invalid_argument("geometric_grid: bad bounds");
    std::vector<double> g(n);
    const double r = std::log(t1 / t0) / (n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = t0 * std::exp(r * i);
    g.back() = t1;
    return g;
}

namespace {

void check_grid(const std::vector<double>& grid) {
    if (grid.size() < 2) throw std::invalid_argument("grid: need at least two points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) throw std::invalid_argument("grid must be strictly increasing");
}

// slope of log(y) vs log(x) over the last decade of the grid
std::optional<double> last_decade_slope(const std::vector<double>& t, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    const double t_lo = t.back() / 10.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || y[i] <= 0.0) continue;
        lx.push_back(std::log(t[i]));
        ly.push_back(std::log(y[i]));
    }
    if (lx.size() < 3) return std::nullopt;
    return linear_fit(lx, ly).slope;
}

}  // namespace

ConditionReport check_symbol_class(const CoefficientProfile& profile, SymbolWeight weight,
                                   int k_max, const std::vector<double>& grid) {
    check_grid(grid);
    if (k_max < 1 || k_max > profile.max_derivative_order())
        throw std::invalid_argument("check_symbol_class: k_max out of range");
    ConditionReport rep;
    rep.condition_id = ConditionId::symbol_class;
    rep.grid = grid;
    bool all_finite = true;
    for (int k = 1; k <= k_max; ++k) {
        double sup = 0.0, loc = grid.front();
        for (double t : grid) {
            double w = 1.0;
            switch (weight) {
                case SymbolWeight::inv_t: w = std::pow(1.0 + t, -k); break;
                case SymbolWeight::xi_weight: w = std::pow(1.0 + t, -(1 + k)); break;
                case SymbolWeight::shape_ratio: {
                    const double lam = profile.eval(t, 0);
                    const double Lam = profile.primitive(t);
                    w = lam * std::pow(lam / Lam, k);
                    break;
                }
            }
            const double ratio = std::abs(profile.eval(t, k)) / w;
            if (ratio > sup) {
                sup = ratio;
                loc = t;
            }
        }
        rep.constants[k] = sup;
        rep.sup_location[k] = loc;
        if (!std::isfinite(sup)) all_finite = false;
    }
    rep.verdict = all_finite ? Verdict::satisfied : Verdict::violated;
    return rep;
}

ConditionReport stabilisation_measure(const CoefficientProfile& profile, double limit,
                                      const CoefficientProfile* shape,
                                      const std::vector<double>& grid) {
    check_grid(grid);
    ConditionReport rep;
    rep.condition_id = ConditionId::stabilisation;
    rep.grid = grid;
    auto integrand = [&](double s) {
        const double d = std::abs(profile.eval(s, 0) - limit);
        return shape ? shape->eval(s, 0) * d : d;
    };
    rep.samples.resize(grid.size());
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double a = (i == 0) ? 0.0 : prev;
        const double b = grid[i];
        acc += integrate_adaptive(integrand, a, b, 1e-10 * std::max(1.0, b - a)).value;
        rep.samples[i] = acc;
        prev = b;
    }
    auto slope = last_decade_slope(grid, rep.samples);
    if (!slope) {
        // S identically zero: the condition holds trivially
        rep.fitted_exponent = -std::numeric_limits<double>::infinity();
        rep.verdict = Verdict::satisfied;
        return rep;
    }
    rep.fitted_exponent = *slope;
    if (*slope < 0.9)
        rep.verdict = Verdict::satisfied;
    else if (*slope >= 0.95)
        rep.verdict = Verdict::violated;
    else
        rep.verdict = Verdict::inconclusive;
    return rep;
}

DissipationReport classify_dissipation(const CoefficientProfile& b,
                                       const std::vector<double>& grid) {
    check_grid(grid);
    if (grid.front() <= 0.0 || grid.back() / grid.front() < 1e3)
        throw std::invalid_argument("classify_dissipation: grid must span at least three decades");
    DissipationReport out;
    out.detail.condition_id = ConditionId::dissipation_class;
    out.detail.grid = grid;
    out.detail.samples.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.detail.samples[i] = grid[i] * b.eval(grid[i], 0);

    const double t_lo = grid.back() / 10.0;
    double env_max = 0.0, env_sum = 0.0;
    std::size_t n_tail = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < t_lo) continue;
        env_max = std::max(env_max, out.detail.samples[i]);
        env_sum += out.detail.samples[i];
        ++n_tail;
    }
    const double env_mean = n_tail ? env_sum / n_tail : 0.0;
    auto slope = last_decade_slope(grid, out.detail.samples);

    out.classification = DissipationClass::inconclusive;
    if (slope && *slope > 0.3 && env_max > 1.0) {
        out.classification = DissipationClass::effective;
    } else if (slope && std::abs(*slope) <= 0.1) {
        if (env_max < 0.45)
            out.classification = DissipationClass::non_effective;
        else if (b.family() == Family::inverse_damping && env_mean > 1.0)
            out.classification = DissipationClass::over_damping;
    } else if (!slope && env_max == 0.0) {
        out.classification = DissipationClass::non_effective;  // b identically zero
    }
    out.detail.fitted_exponent = slope ? std::optional<double>(*slope) : std::nullopt;
    out.detail.verdict = out.classification == DissipationClass::inconclusive
                             ? Verdict::inconclusive
                             : Verdict::satisfied;
    return out;
}

}  // namespace wavelab::coeffs
