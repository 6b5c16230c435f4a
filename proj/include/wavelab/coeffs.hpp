#pragma once

// Coefficient families for the time-dependent wave models: propagation speed
// a(t), dissipation b(t), mass m(t) and shape functions lambda(t), together
// with exact derivatives, primitives and the condition checkers used by the
// rate-verification scenarios.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wavelab/jet.hpp"

namespace wavelab::coeffs {

enum class Family {
    constant,
    log_sine,
    sine_power,
    bump_sum,
    power_shape,
    inverse_damping,
    power_damping,
    periodic_damping,
    modulated_damping,
    periodic_speed,
};

std::string family_name(Family f);

class CoefficientProfile {
  public:
    // Named constructors, one per family.
    static CoefficientProfile constant(double c);
    // a(t) = c0 + c1*sin(log(e + t))
    static CoefficientProfile log_sine(double c0, double c1);
    // a(t) = c0 + c1*sin(t^alpha)
    static CoefficientProfile sine_power(double c0, double c1, double alpha);
    // a(t) = 1 + sum_j eta_j psi((t - t_j)/delta_j), t_j = 2^j, delta_j = 2^(jq),
    // eta_j = 2^(j(q-p)), psi the normalized smooth bump on [0,1].
    static CoefficientProfile bump_sum(double p, double q, int bumps);
    // lambda(t) = (1+t)^l
    static CoefficientProfile power_shape(double l);
    // b(t) = mu/(1+t)
    static CoefficientProfile inverse_damping(double mu);
    // b(t) = (1+t)^(-gamma), gamma in (-1, 1)
    static CoefficientProfile power_damping(double gamma);
    // b(t) = b0 + b1*cos(2 pi t / T), b0 > |b1|
    static CoefficientProfile periodic_damping(double b0, double b1, double T);
    // 2b(t) = mu(t) + sigma(t), mu = mu0/(1+t), sigma = mu*sin(t^alpha)
    static CoefficientProfile modulated_damping(double mu0, double alpha);
    // a(t) = sqrt(c0^2 + eps*cos(2 pi t / T))
    static CoefficientProfile periodic_speed(double c0, double eps, double T);

    static CoefficientProfile from_config(const std::string& family,
                                          const std::map<std::string, double>& params);

    Family family() const { return family_; }
    const std::map<std::string, double>& params() const { return params_; }
    std::optional<double> period() const { return period_; }
    int max_derivative_order() const { return max_order_; }

    // k-th derivative at t, by closed-form/Taylor-mode differentiation.
    double eval(double t, int k = 0) const;

    // Integral from 0 to t of the profile value; shape families return
    // Lambda(t) = 1 + integral. Closed form where available, otherwise
    // adaptive quadrature to 1e-10 absolute.
    double primitive(double t) const;

    // Upper bound for the value over [t0, t1], by closed form or sampling.
    double sup_value(double t0, double t1) const;

    std::string describe() const;

    // Bump normalization: psi(s) = kBumpKappa * exp(-1/(s(1-s))) on (0,1),
    // which integrates to exactly 1/2.
    static constexpr double kBumpKappa = 71.125187888548;

  private:
    CoefficientProfile(Family f, std::map<std::string, double> params,
                       std::optional<double> period, int max_order);

    Jet eval_jet(double t) const;

    Family family_;
    std::map<std::string, double> params_;
    std::optional<double> period_;
    int max_order_;

    // decoded parameters for fast evaluation
    std::array<double, 4> p_{};
    struct BumpSpec {
        double t0, delta, eta;
    };
    std::vector<BumpSpec> bumps_;
};

enum class ConditionId { symbol_class, stabilisation, dissipation_class, shape_admissibility };
enum class Verdict { satisfied, violated, inconclusive };

std::string verdict_name(Verdict v);

struct ConditionReport {
    ConditionId condition_id;
    std::vector<double> grid;
    // minimal observed constant per derivative order, with its location
    std::map<int, double> constants;
    std::map<int, double> sup_location;
    // sampled diagnostic values on the grid (S(t), or t*b(t), ...)
    std::vector<double> samples;
    std::optional<double> fitted_exponent;
    Verdict verdict = Verdict::inconclusive;
};

enum class SymbolWeight {
    inv_t,        // (1+t)^(-k)
    shape_ratio,  // lam(t) * (lam(t)/Lam(t))^k
    xi_weight,    // (1+t)^(-(1+k))
};

// constants[k] = sup over grid of |a^(k)(t)| / weight_k(t).
ConditionReport check_symbol_class(const CoefficientProfile& profile, SymbolWeight weight,
                                   int k_max, const std::vector<double>& grid);

// S(t) = int_0^t (lam(s)*) |coef(s) - limit| ds on the grid, with the growth
// exponent fitted over the last decade.
ConditionReport stabilisation_measure(const CoefficientProfile& profile, double limit,
                                      const CoefficientProfile* shape,
                                      const std::vector<double>& grid);

enum class DissipationClass { non_effective, effective, over_damping, inconclusive };

std::string dissipation_class_name(DissipationClass c);

struct DissipationReport {
    DissipationClass classification;
    ConditionReport detail;  // samples hold the t*b(t) envelope
};

DissipationReport classify_dissipation(const CoefficientProfile& b, const std::vector<double>& grid);

// Geometric grid helper: n points from t0 > 0 to t1.
std::vector<double> geometric_grid(double t0, double t1, std::size_t n);

}  // namespace wavelab::coeffs
