#include "doctest.h"

#include <cmath>

#include "wavelab/asymptotics.hpp"
#include "wavelab/rates.hpp"

using namespace wavelab;
using namespace wavelab::asymptotics;
using coeffs::CoefficientProfile;

TEST_CASE("heat surrogate closed form") {
    HeatSurrogate s{2.0, 0.5};
    auto w = s.mode({1.0, 0.0}, {4.0, 0.0}, 0.25, 2.0);
    CHECK(w.real() == doctest::Approx(3.0 * std::exp(-1.0)).epsilon(1e-14));
    HeatSurrogate bad{-1.0, 0.0};
    CHECK_THROWS_AS(bad.mode(1.0, 0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("deficit of the zero mode decays exponentially") {
    // 2b = 1 at lambda = 0: u = u1 + u2 (1 - e^-t), w = u1 + u2
    spectral::SpectralData data;
    data.dimension = 1;
    data.nodes = {0.0};
    data.weights = {1.0};
    data.u1_hat = {0.3};
    data.u2_hat = {2.0};
    modeode::ModeParams base;
    base.damping = CoefficientProfile::constant(0.5);
    std::vector<double> times = {0.0, 1.0, 2.0, 4.0};
    auto trajs = spectral::integrate_ensemble(data, base, times, 1e-12);
    auto trace = diffusion_deficit(data, trajs, HeatSurrogate{1.0, 1.0});
    for (std::size_t k = 0; k < times.size(); ++k)
        CHECK(trace.values[k] == doctest::Approx(2.0 * std::exp(-times[k])).epsilon(1e-8));
}

TEST_CASE("diffusion gain for 2b = 1 and its collapse under a wrong alpha") {
    modeode::ModeParams base;
    base.damping = CoefficientProfile::constant(0.5);
    spectral::FrequencyGrid grid;
    grid.rho_max = 4.0;
    grid.count = 48;
    auto data = spectral::gaussian_data(3, {1.0, 1.0, 1.0, 0.4}, grid);
    auto times = coeffs::geometric_grid(1.0, 2000.0, 40);
    times.insert(times.begin(), 0.0);
    auto trajs = spectral::integrate_ensemble(data, base, times, 1e-10, 4);

    auto u_l2 = spectral::l2_norm_trace(data, trajs, spectral::Quantity::field);
    auto window = rates::last_decade(u_l2);
    auto u_fit = rates::fit_power_decay(u_l2, rates::ClockFunction::poly(), window);
    CHECK(u_fit.exponent == doctest::Approx(0.75).epsilon(0.12));

    auto deficit = diffusion_deficit(data, trajs, HeatSurrogate{1.0, 1.0});
    auto d_fit = rates::fit_power_decay(deficit, rates::ClockFunction::poly(), window);
    CHECK(d_fit.exponent - u_fit.exponent >= 0.9);

    auto wrong = diffusion_deficit(data, trajs, HeatSurrogate{1.2, 1.0});
    auto w_fit = rates::fit_power_decay(wrong, rates::ClockFunction::poly(), window);
    CHECK(w_fit.exponent - u_fit.exponent < 0.5);
}

TEST_CASE("three-term comparison sharpens the constant-damping deficit") {
    modeode::ModeParams base;
    base.damping = CoefficientProfile::constant(0.5);
    spectral::FrequencyGrid grid;
    grid.rho_max = 4.0;
    grid.count = 48;
    auto data = spectral::gaussian_data(3, {1.0, 1.0, 1.0, 0.4}, grid);
    std::vector<double> times = {0.0, 2.0, 5.0, 10.0, 20.0};
    auto trajs = spectral::integrate_ensemble(data, base, times, 1e-10, 4);
    auto two_term = diffusion_deficit(data, trajs, HeatSurrogate{1.0, 1.0}, false);
    auto three_term = diffusion_deficit(data, trajs, HeatSurrogate{1.0, 1.0}, true);
    // the free-wave term removes most of the early-time mismatch
    CHECK(three_term.values[1] < two_term.values[1]);
    CHECK(three_term.values[2] < two_term.values[2]);
}

TEST_CASE("alpha-beta estimator against closed-form roots") {
    auto est = estimate_alpha_beta(CoefficientProfile::constant(0.5));
    CHECK(est.valid);
    CHECK(est.alpha_hat == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(est.beta_hat == doctest::Approx(1.0).epsilon(1e-3));

    for (double c : {1.0, 2.0}) {
        auto e = estimate_alpha_beta(CoefficientProfile::constant(c));
        CHECK(e.alpha_hat == doctest::Approx(1.0 / (2.0 * c)).epsilon(1e-3));
        CHECK(e.beta_hat == doctest::Approx(1.0 / (2.0 * c)).epsilon(1e-3));
    }

    // ladder-depth stability
    auto shallow = estimate_alpha_beta(CoefficientProfile::constant(0.5), 0.1, 9);
    auto deep = estimate_alpha_beta(CoefficientProfile::constant(0.5), 0.1, 11);
    CHECK(std::abs(shallow.alpha_hat - deep.alpha_hat) < 1e-4);
    CHECK(std::abs(shallow.beta_hat - deep.beta_hat) < 1e-4);

    auto periodic = estimate_alpha_beta(CoefficientProfile::periodic_damping(0.5, 0.3, 2.0 * 3.14159265358979));
    CHECK(periodic.valid);
    CHECK(periodic.alpha_hat > 0.0);
    CHECK(std::isfinite(periodic.beta_hat));

    CHECK_THROWS_AS(estimate_alpha_beta(CoefficientProfile::constant(0.5), 10.0, 9),
                    std::invalid_argument);  // eigenvalues collide at large lambda
}

TEST_CASE("derived damping matches the asymptotic ratio") {
    auto d = liouville_damping(CoefficientProfile::power_shape(1.0));
    // 2 b(t) (1+t) -> l/(l+1) = 1/2
    const double t = 1e4;
    CHECK(std::abs(2.0 * d.eval(t) * (1.0 + t) - 0.5) <= 0.05);

    auto d2 = liouville_damping(CoefficientProfile::power_shape(2.0));
    CHECK(2.0 * d2.eval(1e5) * (1.0 + 1e5) == doctest::Approx(2.0 / 3.0).epsilon(0.05));

    auto id = liouville_damping(CoefficientProfile::constant(1.0));
    CHECK(id.eval(7.0) == 0.0);
    CHECK(id.map().inverse(7.0) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK_THROWS_AS(id.map().inverse(0.5), std::domain_error);
}

TEST_CASE("liouville transform: two integration routes agree") {
    // identity shape: both routes are the same free oscillator
    CHECK(liouville_verify(CoefficientProfile::constant(1.0), 1.0, {1.0, 0.5}, 50.0, 1e-10) <=
          1e-10);

    const double r1 = liouville_verify(CoefficientProfile::power_shape(1.0), 1.0, {1.0, 0.0},
                                       100.0, 1e-8);
    CHECK(r1 <= 1e-6);

    // residual scales linearly with the data
    const double r10 = liouville_verify(CoefficientProfile::power_shape(1.0), 1.0, {10.0, 0.0},
                                        100.0, 1e-8);
    CHECK(r10 <= 20.0 * std::max(r1, 1e-12));
}
