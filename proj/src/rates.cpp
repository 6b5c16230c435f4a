#include "wavelab/rates.hpp"

#include <cmath>
#include <stdexcept>

#include "wavelab/fitting.hpp"
#include "wavelab/quadrature.hpp"

namespace wavelab::rates {

namespace {

double inv_p_minus_inv_q(double p, double q) {
    const double ip = 1.0 / p;
    const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
    return ip - iq;
}

void require_conjugate(double p, double q) {
    if (p < 1.0 || p > 2.0)
        throw std::invalid_argument("predict: p must lie in [1, 2]");
    if (p == 1.0 && std::isinf(q)) return;
    if (std::isinf(q) || std::abs(1.0 / p + 1.0 / q - 1.0) > 1e-9)
        throw std::invalid_argument("predict: (p, q) must be a conjugate pair");
}

void require_band(double p, double q) {
    if (p < 1.0 || p > 2.0 || (!std::isinf(q) && q < 2.0))
        throw std::invalid_argument("predict: need 1 <= p <= 2 <= q");
}

double first_positive_time(const spectral::EnergyTrace& trace) {
    for (double t : trace.times)
        if (t > 0.0) return t;
    throw std::invalid_argument("rates: trace has no positive times");
}

}  // namespace

ClockFunction::ClockFunction(Kind kind, std::optional<coeffs::CoefficientProfile> profile)
    : kind_(kind), profile_(std::move(profile)) {}

ClockFunction ClockFunction::poly() { return ClockFunction(Kind::poly, std::nullopt); }

ClockFunction ClockFunction::shape_primitive(coeffs::CoefficientProfile shape) {
    return ClockFunction(Kind::shape_primitive, std::move(shape));
}

ClockFunction ClockFunction::reciprocal_damping(coeffs::CoefficientProfile damping) {
    return ClockFunction(Kind::reciprocal_damping, std::move(damping));
}

ClockFunction ClockFunction::damping_exponential(coeffs::CoefficientProfile damping) {
    return ClockFunction(Kind::damping_exponential, std::move(damping));
}

double ClockFunction::eval(double t) const {
    if (t < 0.0) throw std::domain_error("ClockFunction: t must be >= 0");
    switch (kind_) {
        case Kind::poly:
            return 1.0 + t;
        case Kind::shape_primitive:
            return profile_->primitive(t);
        case Kind::reciprocal_damping: {
            const auto& b = *profile_;
            switch (b.family()) {
                case coeffs::Family::constant:
                    return 1.0 + t / b.params().at("c");
                case coeffs::Family::inverse_damping: {
                    const double mu = b.params().at("mu");
                    return 1.0 + ((1.0 + t) * (1.0 + t) - 1.0) / (2.0 * mu);
                }
                case coeffs::Family::power_damping: {
                    const double g = b.params().at("gamma");
                    return 1.0 + (std::pow(1.0 + t, 1.0 + g) - 1.0) / (1.0 + g);
                }
                default: {
                    auto q = integrate_adaptive([&](double s) { return 1.0 / b.eval(s, 0); }, 0.0,
                                                t, 1e-10);
                    if (!q.converged)
                        throw std::runtime_error("ClockFunction: 1/b quadrature failed");
                    return 1.0 + q.value;
                }
            }
        }
        case Kind::damping_exponential:
            return std::exp(profile_->primitive(t));
    }
    throw std::logic_error("ClockFunction: unknown kind");
}

double ClockFunction::log_eval(double t) const {
    if (kind_ == Kind::damping_exponential) {
        if (t < 0.0) throw std::domain_error("ClockFunction: t must be >= 0");
        return profile_->primitive(t);
    }
    return std::log(eval(t));
}

std::string ClockFunction::describe() const {
    switch (kind_) {
        case Kind::poly: return "1+t";
        case Kind::shape_primitive: return "Lambda(t)";
        case Kind::reciprocal_damping: return "1+int ds/b";
        case Kind::damping_exponential: return "beta(t)";
    }
    return "?";
}

std::pair<double, double> last_decade(const spectral::EnergyTrace& trace) {
    if (trace.times.empty()) throw std::invalid_argument("last_decade: empty trace");
    const double hi = trace.times.back();
    if (hi <= 0.0) throw std::invalid_argument("last_decade: trace ends at t <= 0");
    return {hi / 10.0, hi};
}

DecayFit fit_power_decay(const spectral::EnergyTrace& trace, const ClockFunction& clock,
                         std::pair<double, double> window) {
    if (!(window.first < window.second))
        throw std::invalid_argument("fit_power_decay: degenerate window");
    std::vector<double> x, y;
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
        const double t = trace.times[k];
        if (t < window.first || t > window.second) continue;
        if (!(trace.values[k] > 0.0))
            throw std::domain_error("fit_power_decay: values must be positive in the window");
        x.push_back(clock.log_eval(t));
        y.push_back(std::log(trace.values[k]));
    }
    if (x.size() < 10)
        throw std::invalid_argument("fit_power_decay: need at least 10 samples in the window");
    const auto f = linear_fit(x, y);
    DecayFit fit;
    fit.exponent = -f.slope;
    fit.log_amplitude = f.intercept;
    fit.r_squared = f.r_squared;
    fit.window = window;
    return fit;
}

std::string theorem_name(TheoremId id) {
    switch (id) {
        case TheoremId::free_strichartz: return "free_strichartz";
        case TheoremId::reissig_smith: return "reissig_smith";
        case TheoremId::reissig_yagdjian: return "reissig_yagdjian";
        case TheoremId::wirth_noneffective: return "wirth_noneffective";
        case TheoremId::hirosawa_nakazawa: return "hirosawa_nakazawa";
        case TheoremId::wirth_effective: return "wirth_effective";
        case TheoremId::wirth_periodic: return "wirth_periodic";
        case TheoremId::matsumura: return "matsumura";
        case TheoremId::nishihara_diffusion: return "nishihara_diffusion";
        case TheoremId::wirth_diffusion: return "wirth_diffusion";
    }
    return "?";
}

TheoremId theorem_from_name(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(TheoremId::wirth_diffusion); ++i) {
        const auto id = static_cast<TheoremId>(i);
        if (theorem_name(id) == name) return id;
    }
    throw std::invalid_argument("unknown theorem id: " + name);
}

RatePrediction predict(TheoremId id, const PredictRequest& req) {
    RatePrediction out;
    out.theorem_id = id;
    out.clock_kind = ClockFunction::Kind::poly;
    const double gap = inv_p_minus_inv_q(req.p, req.q);
    switch (id) {
        case TheoremId::free_strichartz:
        case TheoremId::reissig_smith:
            require_conjugate(req.p, req.q);
            out.exponent = 0.5 * (req.n - 1) * gap;
            break;
        case TheoremId::reissig_yagdjian:
            require_conjugate(req.p, req.q);
            out.exponent = 0.5 * (req.n - 1) * gap;
            out.clock_kind = ClockFunction::Kind::shape_primitive;
            out.extra_factor = "sqrt(lambda(t))";
            break;
        case TheoremId::wirth_noneffective:
            require_conjugate(req.p, req.q);
            out.exponent = 0.5 * (req.n - 1) * gap;
            out.extra_factor = "1/beta(t)";
            break;
        case TheoremId::hirosawa_nakazawa:
            out.exponent = 2.0;
            out.extra_factor = "t^2 E(t) -> 0";
            break;
        case TheoremId::wirth_effective:
        case TheoremId::wirth_periodic: {
            require_band(req.p, req.q);
            double shift = 0.0;
            if (req.quantity == spectral::Quantity::gradient) shift = 0.5;
            if (req.quantity == spectral::Quantity::velocity) shift = 1.0;
            out.exponent = 0.5 * req.n * gap + shift;
            if (id == TheoremId::wirth_effective)
                out.clock_kind = ClockFunction::Kind::reciprocal_damping;
            break;
        }
        case TheoremId::matsumura: {
            require_band(req.p, req.q);
            if (!(req.q == 2.0 || std::isinf(req.q)))
                throw std::invalid_argument("predict: matsumura rates cover q = 2 or q = inf");
            const double dim_part = std::isinf(req.q) ? 0.5 * req.n : 0.25 * req.n;
            out.exponent = 0.5 * req.alpha_order + req.k + dim_part;
            break;
        }
        case TheoremId::nishihara_diffusion:
            require_band(req.p, req.q);
            if (req.n != 3) throw std::invalid_argument("predict: nishihara rates are for n = 3");
            out.exponent = 1.5 * gap + 1.0;
            break;
        case TheoremId::wirth_diffusion:
            out.exponent = 1.0;
            out.extra_factor = "L2 deficit ||u - w||";
            break;
    }
    return out;
}

VerifyReport verify(const spectral::EnergyTrace& trace, const RatePrediction& prediction,
                    const ClockFunction& clock, double tolerance) {
    if (clock.kind() != prediction.clock_kind)
        throw std::invalid_argument("verify: clock kind does not match the prediction");
    const double span = trace.times.back() / first_positive_time(trace);
    if (span < 1e3 - 1e-9)
        throw std::invalid_argument("verify: trace must span at least 3 decades");
    VerifyReport report;
    report.fitted = fit_power_decay(trace, clock, last_decade(trace));
    report.predicted = prediction.exponent;
    report.pass = std::abs(report.fitted.exponent - report.predicted) <= tolerance &&
                  report.fitted.r_squared >= 0.95;
    return report;
}

ScatteringLimit scattering_limit(const spectral::EnergyTrace& trace,
                                 const ClockFunction& beta_clock) {
    if (trace.times.size() != trace.values.size() || trace.times.empty())
        throw std::invalid_argument("scattering_limit: malformed trace");
    const double span = trace.times.back() / first_positive_time(trace);
    if (span < 1e2 - 1e-9)
        throw std::invalid_argument("scattering_limit: trace must span at least 2 decades");
    const double lo = trace.times.back() / 10.0;
    double sum = 0.0, mn = 0.0, mx = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
        if (trace.times[k] < lo) continue;
        const double w = std::exp(2.0 * beta_clock.log_eval(trace.times[k])) * trace.values[k];
        if (count == 0) mn = mx = w;
        mn = std::min(mn, w);
        mx = std::max(mx, w);
        sum += w;
        ++count;
    }
    if (count < 3) throw std::invalid_argument("scattering_limit: too few samples in last decade");
    ScatteringLimit out;
    out.limit_estimate = sum / count;
    out.converged = out.limit_estimate > 0.0 && (mx - mn) / out.limit_estimate < 0.01;
    return out;
}

}  // namespace wavelab::rates
