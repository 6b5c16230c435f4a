#pragma once

// Theorem-specific decay clocks, power-law fitting on energy/norm traces and
// pass/fail verification against predicted rates.

#include <optional>
#include <string>
#include <utility>

#include "wavelab/coeffs.hpp"
#include "wavelab/spectral.hpp"

namespace wavelab::rates {

// The "clock" g(t) against which decay is measured: fits use log g(t), so the
// exponential clock never overflows.
class ClockFunction {
  public:
    enum class Kind { poly, shape_primitive, reciprocal_damping, damping_exponential };

    static ClockFunction poly();
    // Lambda(t) = 1 + int_0^t lambda
    static ClockFunction shape_primitive(coeffs::CoefficientProfile shape);
    // 1 + int_0^t ds / b(s)
    static ClockFunction reciprocal_damping(coeffs::CoefficientProfile damping);
    // beta(t) = exp(int_0^t b)
    static ClockFunction damping_exponential(coeffs::CoefficientProfile damping);

    Kind kind() const { return kind_; }
    const std::optional<coeffs::CoefficientProfile>& profile() const { return profile_; }

    double eval(double t) const;
    double log_eval(double t) const;
    std::string describe() const;

  private:
    ClockFunction(Kind kind, std::optional<coeffs::CoefficientProfile> profile);
    Kind kind_;
    std::optional<coeffs::CoefficientProfile> profile_;
};

struct DecayFit {
    double exponent = 0.0;  // value ~ clock^(-exponent)
    double log_amplitude = 0.0;
    double r_squared = 0.0;
    std::pair<double, double> window{0.0, 0.0};
};

DecayFit fit_power_decay(const spectral::EnergyTrace& trace, const ClockFunction& clock,
                         std::pair<double, double> window);

// Last decade of the trace, the default asymptotic fit window.
std::pair<double, double> last_decade(const spectral::EnergyTrace& trace);

enum class TheoremId {
    free_strichartz,
    reissig_smith,
    reissig_yagdjian,
    wirth_noneffective,
    hirosawa_nakazawa,
    wirth_effective,
    wirth_periodic,
    matsumura,
    nishihara_diffusion,
    wirth_diffusion,
};

std::string theorem_name(TheoremId id);
TheoremId theorem_from_name(const std::string& name);

struct PredictRequest {
    int n = 3;
    double p = 2.0;
    double q = 2.0;          // may be infinity
    int k = 0;               // time-derivative order (matsumura)
    int alpha_order = 0;     // spatial-derivative order |alpha| (matsumura)
    spectral::Quantity quantity = spectral::Quantity::field;
};

struct RatePrediction {
    TheoremId theorem_id;
    ClockFunction::Kind clock_kind;
    double exponent = 0.0;
    std::string extra_factor;  // e.g. "sqrt(lambda(t))", "1/beta(t)"
};

RatePrediction predict(TheoremId id, const PredictRequest& request);

struct VerifyReport {
    DecayFit fitted;
    double predicted = 0.0;
    bool pass = false;
};

// pass iff |fitted - predicted| <= tolerance and r^2 >= 0.95; the fit runs on
// the last decade, and the trace must span at least 3 decades.
VerifyReport verify(const spectral::EnergyTrace& trace, const RatePrediction& prediction,
                    const ClockFunction& clock, double tolerance);

struct ScatteringLimit {
    double limit_estimate = 0.0;
    bool converged = false;
};

// Finite-horizon surrogate for "lim beta^2(t) E(t) exists and is non-zero":
// mean over the final decade, converged iff relative variation < 1%.
ScatteringLimit scattering_limit(const spectral::EnergyTrace& trace,
                                 const ClockFunction& beta_clock);

}  // namespace wavelab::rates
