#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "wavelab/fitting.hpp"
#include "wavelab/quadrature.hpp"
#include "wavelab/spectral.hpp"

using namespace wavelab;
using namespace wavelab::spectral;
using coeffs::CoefficientProfile;

namespace {
const double pi = std::numbers::pi;

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
    return out;
}

modeode::ModeParams free_wave() { return {}; }
}  // namespace

TEST_CASE("validation errors") {
    SpectralData bad;
    bad.dimension = 4;
    bad.nodes = {1.0};
    bad.weights = {1.0};
    bad.u1_hat = {1.0};
    bad.u2_hat = {0.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.dimension = 3;
    CHECK_NOTHROW(bad.validate());
    bad.nodes = {2.0, 1.0};
    bad.weights = {1.0, 1.0};
    bad.u1_hat = {1.0, 1.0};
    bad.u2_hat = {0.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.nodes = {1.0, 2.0};
    bad.weights = {1.0, -1.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("single-node free wave carries constant energy 2") {
    SpectralData data;
    data.dimension = 1;
    data.nodes = {2.0};
    data.weights = {1.0};
    data.u1_hat = {1.0};
    data.u2_hat = {0.0};
    auto trajs = integrate_ensemble(data, free_wave(), {0.0, 1.0, 3.0}, 1e-12);
    auto trace = plancherel_energy(data, trajs, nullptr, TraceKind::plain);
    for (double e : trace.values) CHECK(e == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("free-wave conservation and Parseval at t=0 (n=3 Gaussian)") {
    FrequencyGrid grid;
    grid.rho_max = 12.0;
    grid.count = 256;
    auto data = gaussian_data(3, {1.0, 1.0, 1.0, 0.0}, grid);
    std::vector<double> times = {0.0, 1.0, 10.0, 50.0, 120.0, 200.0};
    auto trajs = integrate_ensemble(data, free_wave(), times, 1e-12);
    auto trace = plancherel_energy(data, trajs, nullptr, TraceKind::plain);

    // E(0) = 1/2 int |grad u1|^2 = 0.75 pi^(3/2) for u1 = exp(-|x|^2/2)
    CHECK(trace.values[0] == doctest::Approx(0.75 * std::pow(pi, 1.5)).epsilon(1e-8));
    for (double e : trace.values) CHECK(std::abs(e / trace.values[0] - 1.0) <= 1e-8);
}

TEST_CASE("doubling the node count leaves the trace unchanged to 1e-6") {
    std::vector<double> times = {0.0, 20.0, 80.0};
    std::vector<double> coarse_vals, fine_vals;
    for (int count : {256, 512}) {
        FrequencyGrid grid;
        grid.rho_max = 12.0;
        grid.count = count;
        auto data = gaussian_data(3, {1.0, 1.0, 0.8, 0.5}, grid);
        auto trajs = integrate_ensemble(data, free_wave(), times, 1e-12);
        auto trace = plancherel_energy(data, trajs, nullptr, TraceKind::plain);
        (count == 256 ? coarse_vals : fine_vals) = trace.values;
    }
    for (std::size_t k = 0; k < coarse_vals.size(); ++k)
        CHECK(std::abs(coarse_vals[k] / fine_vals[k] - 1.0) < 1e-6);
}

TEST_CASE("two-sided energy bound under an oscillating speed") {
    modeode::ModeParams base;
    base.speed = CoefficientProfile::log_sine(2.0, 1.0);
    FrequencyGrid grid;
    grid.rho_max = 8.0;
    grid.count = 64;
    auto data = gaussian_data(3, {1.0, 1.0, 1.0, 0.3}, grid);
    auto times = coeffs::geometric_grid(1.0, 1000.0, 25);
    times.insert(times.begin(), 0.0);
    auto trajs = integrate_ensemble(data, base, times, 1e-8, 4);
    auto trace = plancherel_energy(data, trajs, nullptr, TraceKind::plain);
    double lo = trace.values[0], hi = trace.values[0];
    for (double e : trace.values) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    CHECK(hi / lo < 20.0);
}

TEST_CASE("ensemble is byte-identical across thread counts") {
    FrequencyGrid grid;
    grid.count = 64;
    auto data = gaussian_data(3, {1.0, 1.0, 1.0, 0.5}, grid);
    std::vector<double> times = {0.0, 5.0, 15.0};
    auto serial = integrate_ensemble(data, free_wave(), times, 1e-10, 1);
    auto parallel = integrate_ensemble(data, free_wave(), times, 1e-10, 7);
    auto t1 = plancherel_energy(data, serial, nullptr, TraceKind::plain);
    auto t2 = plancherel_energy(data, parallel, nullptr, TraceKind::plain);
    for (std::size_t k = 0; k < t1.values.size(); ++k) CHECK(t1.values[k] == t2.values[k]);
}

TEST_CASE("1-D synthesis: plane wave, Gaussian pair, d'Alembert") {
    auto data = gaussian_data_1d_signed({1.0, 1.0, 1.0, 0.0}, 10.0, 401);

    // single active mode: constant-modulus plane wave
    std::vector<std::complex<double>> one(data.size(), 0.0);
    one[300] = 1.0;
    auto plane = synthesize_1d(data, one, linspace(-3.0, 3.0, 50));
    for (const auto& v : plane.values)
        CHECK(std::abs(v) == doctest::Approx(std::abs(plane.values[0])).epsilon(1e-12));

    // analytic transform pair at t=0
    auto snap = synthesize_1d(data, data.u1_hat, linspace(-5.0, 5.0, 101));
    for (std::size_t j = 0; j < snap.grid.size(); ++j) {
        const double x = snap.grid[j];
        CHECK(std::abs(snap.values[j] - std::exp(-0.5 * x * x)) < 1e-8);
        CHECK(std::abs(snap.values[j].imag()) < 1e-10);
    }

    // free evolution splits into two traveling half-profiles
    const double t = 5.0;
    auto trajs = integrate_ensemble(data, free_wave(), {0.0, t}, 1e-11);
    auto moved = synthesize_1d(data, states_at(trajs, 1, Quantity::field),
                               linspace(-12.0, 12.0, 201), t);
    for (std::size_t j = 0; j < moved.grid.size(); ++j) {
        const double x = moved.grid[j];
        const double expect =
            0.5 * (std::exp(-0.5 * (x - t) * (x - t)) + std::exp(-0.5 * (x + t) * (x + t)));
        CHECK(std::abs(moved.values[j] - expect) < 1e-6);
    }
}

TEST_CASE("1-D round trip: forward transform of the synthesis recovers the amplitudes") {
    auto data = gaussian_data_1d_signed({1.0, 1.0, 1.0, 0.0}, 8.0, 321);
    auto x_grid = linspace(-40.0, 40.0, 4001);
    auto snap = synthesize_1d(data, data.u1_hat, x_grid);
    const double dx = x_grid[1] - x_grid[0];
    for (std::size_t i = 60; i < data.size(); i += 50) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < x_grid.size(); ++j) {
            const double w = (j == 0 || j + 1 == x_grid.size()) ? 0.5 : 1.0;
            acc += w * dx * snap.values[j] *
                   std::exp(std::complex<double>(0.0, -data.nodes[i] * x_grid[j]));
        }
        CHECK(std::abs(acc - data.u1_hat[i]) < 1e-8);
    }
}

TEST_CASE("radial 3-D synthesis: Gaussian pair and origin limit") {
    FrequencyGrid grid;
    grid.rho_max = 15.0;
    grid.count = 600;
    grid.spacing = FrequencyGrid::Spacing::uniform;
    // u(r) = exp(-r^2) has width 1/sqrt(2): u_hat = pi^(3/2) exp(-rho^2/4)
    auto data = gaussian_data(3, {1.0 / std::sqrt(2.0), 1.0, 1.0, 0.0}, grid);
    CHECK(data.u1_hat[0].real() ==
          doctest::Approx(std::pow(pi, 1.5) * std::exp(-0.25 * 1e-6)).epsilon(1e-10));
    auto snap = synthesize_radial3d(data, data.u1_hat, linspace(0.0, 4.0, 81));
    for (std::size_t j = 0; j < snap.grid.size(); ++j) {
        const double r = snap.grid[j];
        CHECK(std::abs(snap.values[j] - std::exp(-r * r)) < 1e-6);
    }
    CHECK(snap.values[0].real() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Parseval between Plancherel traces and synthesized fields") {
    // n = 1
    auto d1 = gaussian_data_1d_signed({1.0, 1.0, 0.7, 0.4}, 10.0, 401);
    auto t1 = integrate_ensemble(d1, free_wave(), {0.0}, 1e-11);
    auto l2_field = l2_norm_trace(d1, t1, Quantity::field).values[0];
    auto l2_vel = l2_norm_trace(d1, t1, Quantity::velocity).values[0];
    auto s_field = synthesize_1d(d1, states_at(t1, 0, Quantity::field), linspace(-30.0, 30.0, 3001));
    auto s_vel = synthesize_1d(d1, states_at(t1, 0, Quantity::velocity), linspace(-30.0, 30.0, 3001));
    CHECK(lq_norm(s_field, 2.0, 1) == doctest::Approx(l2_field).epsilon(1e-6));
    CHECK(lq_norm(s_vel, 2.0, 1) == doctest::Approx(l2_vel).epsilon(1e-6));

    // n = 3
    FrequencyGrid grid;
    grid.rho_max = 12.0;
    grid.count = 512;
    auto d3 = gaussian_data(3, {1.0, 1.0, 0.8, 0.6}, grid);
    auto t3 = integrate_ensemble(d3, free_wave(), {0.0}, 1e-11);
    auto s3 = synthesize_radial3d(d3, states_at(t3, 0, Quantity::field),
                                  linspace(0.0, 30.0, 6001));
    CHECK(lq_norm(s3, 2.0, 3) ==
          doctest::Approx(l2_norm_trace(d3, t3, Quantity::field).values[0]).epsilon(1e-6));
}

TEST_CASE("lq_norm closed forms") {
    FieldSnapshot flat;
    flat.grid = linspace(0.0, 1.0, 101);
    flat.values.assign(101, 1.0);
    CHECK(lq_norm(flat, 2.0, 1) == doctest::Approx(1.0).epsilon(1e-12));

    FieldSnapshot gauss;
    gauss.grid = linspace(-10.0, 10.0, 4001);
    for (double x : gauss.grid) gauss.values.push_back(std::exp(-x * x));
    CHECK(lq_norm(gauss, 2.0, 1) == doctest::Approx(std::pow(pi / 2.0, 0.25)).epsilon(1e-8));
    CHECK(lq_norm(gauss, std::numeric_limits<double>::infinity(), 1) == doctest::Approx(1.0));
    CHECK_THROWS_AS(lq_norm(gauss, 0.5, 1), std::invalid_argument);
    CHECK(!support_truncated(gauss));
    FieldSnapshot cut;
    cut.grid = linspace(0.0, 1.0, 11);
    for (double x : cut.grid) cut.values.push_back(std::exp(-x * x));
    CHECK(support_truncated(cut));
}

TEST_CASE("data norms: Plancherel, Sobolev weight and L1 synthesis") {
    SpectralData single;
    single.dimension = 1;
    single.nodes = {1.5};
    single.weights = {1.0};
    single.u1_hat = {1.0};
    single.u2_hat = {0.0};
    CHECK(data_norm(single, 0.0, 2) == doctest::Approx(1.0));

    FrequencyGrid grid;
    grid.rho_max = 14.0;
    grid.count = 512;
    auto d3 = gaussian_data(3, {1.0, 1.0, 1.0, 0.0}, grid);
    // || exp(-r^2/2) ||_L2 = pi^(3/4)
    CHECK(data_norm(d3, 0.0, 2) == doctest::Approx(std::pow(pi, 0.75)).epsilon(1e-8));

    // <D>^2 = I - Laplacian: spatial oracle 4 pi int (4 - r^2)^2 r^2 e^{-r^2} dr
    auto oracle = integrate_adaptive(
        [](double r) {
            const double f = (4.0 - r * r);
            return f * f * r * r * std::exp(-r * r);
        },
        0.0, 12.0, 1e-12);
    CHECK(data_norm(d3, 2.0, 2) ==
          doctest::Approx(std::sqrt(4.0 * pi * oracle.value)).epsilon(1e-8));

    // L1 norms by synthesis; the radial case needs uniform nodes so the
    // oscillatory kernel stays resolved over the whole window
    auto d1 = gaussian_data_1d_signed({1.0, 1.0, 1.0, 0.0}, 10.0, 401);
    CHECK(data_norm(d1, 0.0, 1) == doctest::Approx(std::sqrt(2.0 * pi)).epsilon(1e-6));
    FrequencyGrid ugrid;
    ugrid.rho_max = 10.0;
    ugrid.count = 600;
    ugrid.spacing = FrequencyGrid::Spacing::uniform;
    auto d3u = gaussian_data(3, {1.0, 1.0, 1.0, 0.0}, ugrid);
    CHECK(data_norm(d3u, 0.0, 1) == doctest::Approx(std::pow(2.0 * pi, 1.5)).epsilon(1e-4));
    CHECK_THROWS_AS(data_norm(d3, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(data_norm(d3, 0.0, 3), std::invalid_argument);
}

TEST_CASE("dispersive baseline: free n=3 velocity sup-norm decays like 1/t") {
    FrequencyGrid grid;
    grid.rho_min = 1e-3;
    grid.rho_max = 6.0;
    grid.count = 900;
    grid.spacing = FrequencyGrid::Spacing::uniform;
    auto data = gaussian_data(3, {1.0, 1.0, 1.0, 0.0}, grid);
    auto times = coeffs::geometric_grid(10.0, 100.0, 8);
    times.insert(times.begin(), 0.0);  // data lives at t = 0
    auto trajs = integrate_ensemble(data, free_wave(), times, 1e-10, 4);
    std::vector<double> log_t, log_n;
    for (std::size_t k = 1; k < times.size(); ++k) {
        auto amps = states_at(trajs, k, Quantity::velocity);
        auto snap = synthesize_radial3d(
            data, amps, linspace(std::max(0.0, times[k] - 12.0), times[k] + 12.0, 600), times[k]);
        CHECK(!snap.under_resolved);
        log_t.push_back(std::log(times[k]));
        log_n.push_back(std::log(lq_norm(snap, std::numeric_limits<double>::infinity(), 3)));
    }
    const auto fit = linear_fit(log_t, log_n);
    CHECK(-fit.slope == doctest::Approx(1.0).epsilon(0.1));

    // strong Huygens: the field near the origin is tiny once the front passed
    auto amps = states_at(trajs, 5, Quantity::field);  // t ~ 37
    auto near0 = synthesize_radial3d(data, amps, linspace(0.0, 2.0, 40), times[5]);
    auto front = synthesize_radial3d(
        data, amps, linspace(times[5] - 10.0, times[5] + 10.0, 400), times[5]);
    CHECK(lq_norm(near0, std::numeric_limits<double>::infinity(), 3) <
          1e-3 * lq_norm(front, std::numeric_limits<double>::infinity(), 3));
}
