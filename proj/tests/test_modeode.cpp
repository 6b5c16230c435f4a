#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "wavelab/coeffs.hpp"
#include "wavelab/modeode.hpp"
#include "wavelab/dopri5.hpp"

using namespace wavelab;
using namespace wavelab::modeode;
using coeffs::CoefficientProfile;

namespace {
const double pi = std::numbers::pi;

ModeParams free_mode(double lam) {
    ModeParams p;
    p.lambda_spec = lam;
    return p;
}
}  // namespace

TEST_CASE("constant-coefficient oscillator: v(t) = cos(2t)") {
    auto traj = integrate_mode(free_mode(4.0), {1.0, 0.0}, {0.0, pi / 2, pi}, 1e-12);
    CHECK(traj.states[0].v.real() == 1.0);
    CHECK(std::abs(traj.states[1].v.real() + 1.0) < 1e-9);
    CHECK(std::abs(traj.states[2].v.real() - 1.0) < 1e-9);
    CHECK(std::abs(traj.states[2].v_dot.real()) < 1e-8);
}

TEST_CASE("telegraph mode at lambda=0: v = u1 + u2(1 - e^-t)") {
    ModeParams p = free_mode(0.0);
    p.damping = CoefficientProfile::constant(0.5);  // 2b = 1
    const double u1 = 0.3, u2 = 2.0;
    auto traj = integrate_mode(p, {u1, u2}, {0.0, 1.0, 2.0}, 1e-12);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        CHECK(traj.states[i].v.real() ==
              doctest::Approx(u1 + u2 * (1.0 - std::exp(-t))).epsilon(1e-9));
    }
}

TEST_CASE("self-convergence against tighter tolerance") {
    ModeParams p = free_mode(1.0);
    p.damping = CoefficientProfile::inverse_damping(0.3);
    auto coarse = integrate_mode(p, {1.0, 0.0}, {0.0, 100.0}, 1e-10);
    auto fine = integrate_mode(p, {1.0, 0.0}, {0.0, 100.0}, 1e-13);
    CHECK(std::abs(coarse.states[1].v - fine.states[1].v) < 1e-8);
    CHECK(std::abs(coarse.states[1].v_dot - fine.states[1].v_dot) < 1e-8);
}

TEST_CASE("self-convergence: tighter tolerance shrinks the endpoint error") {
    ModeParams p = free_mode(3.0);
    p.speed = CoefficientProfile::log_sine(2.0, 1.0);
    auto ref = integrate_mode(p, {1.0, 0.5}, {0.0, 50.0}, 1e-13);
    auto mid = integrate_mode(p, {1.0, 0.5}, {0.0, 50.0}, 1e-8);
    auto low = integrate_mode(p, {1.0, 0.5}, {0.0, 50.0}, 1e-11);
    const double e_mid = std::abs(mid.states[1].v - ref.states[1].v);
    const double e_low = std::abs(low.states[1].v - ref.states[1].v);
    CHECK(e_low * 10.0 < e_mid);
}

TEST_CASE("observed convergence order of the stepper is at least 4") {
    // force fixed steps through h_max with a loose tolerance
    auto rhs = [](double t, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        dy[0] = y[1];
        dy[1] = -(2.0 + std::sin(t)) * y[0];
    };
    auto endpoint = [&](double h) {
        std::array<double, 2> out{};
        ode::StepOptions opt;
        opt.rtol = 1e-4;
        opt.h_max = h;
        opt.h_init = h;
        ode::integrate_dense<2>(rhs, {1.0, 0.0}, {0.0, 10.0}, {1.0, 1.0}, opt,
                                [&](std::size_t, const std::array<double, 2>& y) { out = y; });
        return out;
    };
    auto ref = endpoint(1e-3);
    const double e1 = std::abs(endpoint(0.05)[0] - ref[0]);
    const double e2 = std::abs(endpoint(0.025)[0] - ref[0]);
    const double order = std::log2(e1 / e2);
    CHECK(order >= 4.0);
}

TEST_CASE("linearity in the initial data") {
    ModeParams p = free_mode(2.0);
    p.speed = CoefficientProfile::log_sine(2.0, 1.0);
    std::vector<double> times = {0.0, 2.5, 5.0, 10.0};
    const std::complex<double> alpha{1.7, 0.0};
    ModeState z1{{1.0, 0.2}, {0.0, -0.3}}, z2{{-0.4, 0.0}, {1.1, 0.6}};
    ModeState zc{alpha * z1.v + z2.v, alpha * z1.v_dot + z2.v_dot};
    auto t1 = integrate_mode(p, z1, times, 1e-13);
    auto t2 = integrate_mode(p, z2, times, 1e-13);
    auto tc = integrate_mode(p, zc, times, 1e-13);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto expect_v = alpha * t1.states[i].v + t2.states[i].v;
        const auto expect_d = alpha * t1.states[i].v_dot + t2.states[i].v_dot;
        CHECK(std::abs(tc.states[i].v - expect_v) <= 1e-10 * (1.0 + std::abs(expect_v)));
        CHECK(std::abs(tc.states[i].v_dot - expect_d) <= 1e-10 * (1.0 + std::abs(expect_d)));
    }
}

TEST_CASE("fundamental matrix closed form for constant speed") {
    ModeParams p = free_mode(2.25);
    p.speed = CoefficientProfile::constant(2.0);
    const double w = 2.0 * std::sqrt(2.25);  // c sqrt(lambda)
    const double T = 1.0;
    auto X = fundamental_matrix(p, 0.0, T, 1e-12);
    CHECK(X.m[0][0] == doctest::Approx(std::cos(w * T)).epsilon(1e-8));
    CHECK(X.m[0][1] == doctest::Approx(std::sin(w * T) / w).epsilon(1e-8));
    CHECK(X.m[1][0] == doctest::Approx(-w * std::sin(w * T)).epsilon(1e-8));
    CHECK(X.m[1][1] == doctest::Approx(std::cos(w * T)).epsilon(1e-8));
}

TEST_CASE("Abel identity for the Wronskian") {
    // undamped: det X = 1
    ModeParams p = free_mode(1.3);
    p.speed = CoefficientProfile::log_sine(2.0, 1.0);
    auto X = fundamental_matrix(p, 0.0, 7.0, 1e-12);
    CHECK(std::abs(X.det() - 1.0) < 1e-9);

    // 2b = 1 over [0,1]: det X = exp(-1)
    ModeParams q = free_mode(1.0);
    q.damping = CoefficientProfile::constant(0.5);
    auto Y = fundamental_matrix(q, 0.0, 1.0, 1e-12);
    CHECK(std::abs(Y.det() - std::exp(-1.0)) < 1e-9);

    // variable damping: det X = exp(-2 int b)
    ModeParams r = free_mode(2.0);
    r.damping = CoefficientProfile::power_damping(0.5);
    auto Z = fundamental_matrix(r, 0.0, 5.0, 1e-12);
    const double expect = std::exp(-2.0 * r.damping->primitive(5.0));
    CHECK(std::abs(Z.det() - expect) / expect < 1e-8);
}

TEST_CASE("energy conservation for the free constant-speed mode") {
    ModeParams p = free_mode(2.0);
    p.speed = CoefficientProfile::constant(1.3);
    auto times = coeffs::geometric_grid(1.0, 200.0, 40);
    times.insert(times.begin(), 0.0);
    auto traj = integrate_mode(p, {1.0, 0.4}, times, 1e-12);
    const double a = 1.3;
    const double e0 = mode_energy(traj.states[0], p.lambda_spec, a, EnergyKind::adapted);
    for (const auto& s : traj.states) {
        const double e = mode_energy(s, p.lambda_spec, a, EnergyKind::adapted);
        CHECK(std::abs(e / e0 - 1.0) < 1e-8);
    }
}

TEST_CASE("mode_energy examples") {
    CHECK(mode_energy({{1.0, 0.0}, {0.0, 0.0}}, 4.0, 1.0, EnergyKind::plain) == 2.0);
    CHECK(mode_energy({{0.0, 0.0}, {3.0, 0.0}}, 7.0, 1.0, EnergyKind::plain) == 4.5);
    CHECK(mode_energy({{1.0, 0.0}, {0.0, 0.0}}, 1.0, 2.0, EnergyKind::adapted) == 2.0);
    CHECK_THROWS_AS(mode_energy({}, 1.0, 0.0, EnergyKind::plain), std::invalid_argument);
}

TEST_CASE("precondition violations") {
    CHECK_THROWS_AS(integrate_mode(free_mode(1.0), {1.0, 0.0}, {0.0, 1.0}, 1e-2),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_mode(free_mode(1.0), {1.0, 0.0}, {1.0, 0.5}, 1e-10),
                    std::invalid_argument);
    CHECK_THROWS_AS(fundamental_matrix(free_mode(1.0), 1.0, 1.0), std::invalid_argument);
}
