#pragma once

// Hill problems with periodic coefficients: monodromy matrices, discriminant
// scans, instability intervals and the exponential-growth demonstration.

#include <optional>
#include <vector>

#include "wavelab/coeffs.hpp"
#include "wavelab/modeode.hpp"
#include "wavelab/spectral.hpp"

namespace wavelab::floquet {

struct HillProblem {
    coeffs::CoefficientProfile speed = coeffs::CoefficientProfile::constant(1.0);
    std::optional<coeffs::CoefficientProfile> damping;
    std::optional<coeffs::CoefficientProfile> mass;

    double period() const;  // common period, validated
};

struct DiscriminantSample {
    double lambda_spec = 0.0;
    double discriminant = 0.0;  // trace of the period monodromy
    double det_monodromy = 1.0;
    double growth_rate = 0.0;
};

struct InstabilityInterval {
    double lower = 0.0;
    double upper = 0.0;
    double max_growth_rate = 0.0;  // per unit time
    bool truncated_at_scan_end = false;
};

modeode::FundamentalMatrix monodromy(const HillProblem& problem, double lambda_spec,
                                     double tol = 1e-12);

double discriminant(const HillProblem& problem, double lambda_spec, double tol = 1e-12);

// Floquet exponent: log(largest eigenvalue modulus of the monodromy)/T.
// Exactly zero in the damping-free stable case.
double growth_rate(const HillProblem& problem, double lambda_spec, double tol = 1e-12);

std::vector<DiscriminantSample> discriminant_scan(const HillProblem& problem, double lambda_max,
                                                  int scan_points, double tol = 1e-12);

// Scans (0, lambda_max] and refines every stability-boundary crossing by
// bisection to 1e-8 relative. With damping present, instability means the
// spectral radius exceeds the Abel reference exp(-int_0^T b).
std::vector<InstabilityInterval> instability_intervals(const HillProblem& problem,
                                                       double lambda_max, int scan_points,
                                                       double tol = 1e-12);

struct GrowthDemoResult {
    spectral::EnergyTrace trace;
    double fitted_rate = 0.0;       // slope of log E over the last half of the horizon
    double expected_rate = 0.0;     // 2 * max_growth_rate of the interval
    double log_energy_ratio = 0.0;  // log E(t*) / log t* at the diagnostic time
    double diagnostic_time = 0.0;
};

// Integrates an ensemble with smooth bump spectral weight supported inside
// the interval and reports the fitted exponential energy growth rate.
GrowthDemoResult yagdjian_demo(const HillProblem& problem, const InstabilityInterval& interval,
                               double horizon, int n_modes, double amplitude = 1.0,
                               double diagnostic_time = 0.0, double tol = 1e-10);

}  // namespace wavelab::floquet
