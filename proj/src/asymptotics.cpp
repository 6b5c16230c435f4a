#include "wavelab/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "wavelab/dopri5.hpp"

namespace wavelab::asymptotics {

namespace {

struct EigenPair {
    double mu_slow, mu_fast;
    double slope_slow, slope_fast;  // eigenvector (1, slope)
};

EigenPair split_monodromy(const modeode::FundamentalMatrix& M) {
    const double tr = M.trace(), det = M.det();
    const double disc = tr * tr - 4.0 * det;
    if (disc <= 0.0)
        throw std::invalid_argument(
            "estimate_alpha_beta: monodromy eigenvalues are not separated; shrink lambda0");
    const double root = std::sqrt(disc);
    EigenPair out;
    out.mu_slow = 0.5 * (tr + root);  // larger modulus carries the slow mode
    out.mu_fast = 0.5 * (tr - root);
    if (out.mu_slow <= 0.0)
        throw std::invalid_argument("estimate_alpha_beta: slow eigenvalue not positive");
    if (M.m[0][1] == 0.0)
        throw std::invalid_argument("estimate_alpha_beta: degenerate monodromy");
    out.slope_slow = (out.mu_slow - M.m[0][0]) / M.m[0][1];
    out.slope_fast = (out.mu_fast - M.m[0][0]) / M.m[0][1];
    return out;
}

// one Richardson pass for expansions f(lambda) = L + c lambda^order + ...
std::vector<double> richardson(const std::vector<double>& f, double ratio_power) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < f.size(); ++i)
        out.push_back((ratio_power * f[i + 1] - f[i]) / (ratio_power - 1.0));
    return out;
}

}  // namespace

std::complex<double> HeatSurrogate::mode(std::complex<double> u1_hat,
                                         std::complex<double> u2_hat, double lambda_spec,
                                         double t) const {
    if (alpha <= 0.0) throw std::invalid_argument("HeatSurrogate: alpha must be positive");
    return (u1_hat + beta * u2_hat) * std::exp(-alpha * lambda_spec * t);
}

spectral::EnergyTrace diffusion_deficit(const spectral::SpectralData& data,
                                        const std::vector<modeode::ModeTrajectory>& trajectories,
                                        const HeatSurrogate& surrogate, bool include_free_wave) {
    data.validate();
    if (trajectories.size() != data.size())
        throw std::invalid_argument("diffusion_deficit: one trajectory per node required");
    spectral::EnergyTrace trace;
    trace.times = trajectories.front().times;
    trace.kind = spectral::TraceKind::weighted;
    for (const auto& traj : trajectories)
        if (traj.times != trace.times)
            throw std::invalid_argument("diffusion_deficit: trajectories must share output times");
    trace.values.assign(trace.times.size(), 0.0);
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
        const double t = trace.times[k];
        double sum = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double rho = data.nodes[i];
            const double lam = rho * rho;
            std::complex<double> diff = trajectories[i].states[k].v -
                                        surrogate.mode(data.u1_hat[i], data.u2_hat[i], lam, t);
            if (include_free_wave) {
                const double sinc = rho == 0.0 ? t : std::sin(rho * t) / rho;
                const std::complex<double> free_mode =
                    data.u1_hat[i] * std::cos(rho * t) + data.u2_hat[i] * sinc;
                diff -= std::exp(-0.5 * t) * free_mode;
            }
            sum += data.weights[i] * std::norm(diff);
        }
        trace.values[k] = std::sqrt(sum);
    }
    return trace;
}

AlphaBetaEstimate estimate_alpha_beta(const coeffs::CoefficientProfile& damping, double lambda0,
                                      int rungs) {
    if (lambda0 <= 0.0) throw std::invalid_argument("estimate_alpha_beta: lambda0 must be > 0");
    if (rungs < 4) throw std::invalid_argument("estimate_alpha_beta: need at least 4 rungs");
    // constants are trivially periodic: any period works for the monodromy
    const double T = damping.period().value_or(1.0);
    AlphaBetaEstimate out;
    std::vector<double> alphas, betas;
    for (int k = 0; k < rungs; ++k) {
        const double lam = lambda0 * std::pow(4.0, -k);
        modeode::ModeParams params;
        params.lambda_spec = lam;
        params.damping = damping;
        auto M = modeode::fundamental_matrix(params, 0.0, T, 1e-13);
        const auto eig = split_monodromy(M);
        AlphaBetaEstimate::Rung rung;
        rung.lambda_spec = lam;
        rung.nu_slow = std::log(eig.mu_slow) / T;
        rung.alpha_raw = -rung.nu_slow / lam;
        // data (0,1) projects onto the slow mode with amplitude 1/(s-f) and
        // data (1,0) with -f/(s-f): the ratio -1/f is the beta sample
        rung.beta_raw = -1.0 / eig.slope_fast;
        out.ladder.push_back(rung);
        alphas.push_back(rung.alpha_raw);
        betas.push_back(rung.beta_raw);
    }
    const auto a1 = richardson(alphas, 4.0), a2 = richardson(a1, 16.0);
    const auto b1 = richardson(betas, 4.0), b2 = richardson(b1, 16.0);
    out.alpha_hat = a2.back();
    out.beta_hat = b2.back();
    out.alpha_residual = std::abs(a2.back() - a2[a2.size() - 2]);
    out.beta_residual = std::abs(b2.back() - b2[b2.size() - 2]);
    out.valid = out.alpha_hat > 0.0 && std::isfinite(out.alpha_hat) && std::isfinite(out.beta_hat);
    return out;
}

LiouvilleMap::LiouvilleMap(coeffs::CoefficientProfile shape) : shape_(std::move(shape)) {
    primitive_at_zero_ = shape_.primitive(0.0);
    if (!(shape_.eval(0.0, 0) > 0.0))
        throw std::invalid_argument("LiouvilleMap: shape must be positive");
}

double LiouvilleMap::forward(double s) const {
    return 1.0 + shape_.primitive(s) - primitive_at_zero_;
}

double LiouvilleMap::inverse(double t) const {
    if (t < 1.0 - 1e-12) throw std::domain_error("LiouvilleMap: inverse defined for t >= 1");
    if (t <= 1.0) return 0.0;
    double hi = 1.0;
    while (forward(hi) < t) {
        hi *= 2.0;
        if (hi > 1e12) throw std::runtime_error("LiouvilleMap: inversion bracket failure");
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (forward(mid) < t ? lo : hi) = mid;
    }
    const double s = 0.5 * (lo + hi);
    if (std::abs(forward(s) - t) > 1e-10 * (1.0 + t))
        throw std::runtime_error("LiouvilleMap: inversion did not converge");
    return s;
}

DerivedDamping::DerivedDamping(coeffs::CoefficientProfile shape) : map_(std::move(shape)) {}

double DerivedDamping::eval(double t) const {
    const double s = map_.inverse(t);
    const double lam = map_.shape().eval(s, 0);
    return 0.5 * map_.shape().eval(s, 1) / (lam * lam);
}

DerivedDamping liouville_damping(const coeffs::CoefficientProfile& shape) {
    return DerivedDamping(shape);
}

double liouville_verify(const coeffs::CoefficientProfile& shape, double lambda_spec,
                        const modeode::ModeState& init, double horizon, double tol) {
    if (horizon <= 1.0) throw std::invalid_argument("liouville_verify: horizon must exceed 1");
    if (lambda_spec < 0.0) throw std::invalid_argument("liouville_verify: lambda_spec must be >= 0");
    const LiouvilleMap map(shape);
    const DerivedDamping damping(shape);

    auto times = coeffs::geometric_grid(1.0, horizon, 48);
    std::vector<double> s_times;
    for (double t : times) s_times.push_back(map.inverse(t));

    using State = std::array<double, 4>;
    const State y0 = {init.v.real(), init.v.imag(), init.v_dot.real(), init.v_dot.imag()};
    const double s_max = s_times.back();
    const double speed_sup = shape.sup_value(0.0, s_max);
    const double omega = 1.0 + speed_sup * std::sqrt(lambda_spec);
    const std::array<double, 4> weights = {1.0, 1.0, omega, omega};

    // route A: the speed problem in the s variable
    std::vector<State> route_a(s_times.size());
    {
        ode::StepOptions opt;
        opt.rtol = tol;
        opt.h_max = 0.1 / omega;
        auto rhs = [&](double s, const State& y, State& dy) {
            const double a2 = shape.eval(s, 0) * shape.eval(s, 0);
            dy[0] = y[2];
            dy[1] = y[3];
            dy[2] = -a2 * lambda_spec * y[0];
            dy[3] = -a2 * lambda_spec * y[1];
        };
        ode::integrate_dense<4>(rhs, y0, s_times, weights, opt,
                                [&](std::size_t k, const State& y) { route_a[k] = y; });
    }

    // route B: the damped problem in the t variable
    std::vector<State> route_b(times.size());
    {
        const double lam0 = shape.eval(0.0, 0);
        const State z0 = {y0[0], y0[1], y0[2] / lam0, y0[3] / lam0};
        ode::StepOptions opt;
        opt.rtol = tol;
        opt.h_max = 0.1 / (1.0 + std::sqrt(lambda_spec));
        auto rhs = [&](double t, const State& y, State& dy) {
            const double two_b = 2.0 * damping.eval(t);
            dy[0] = y[2];
            dy[1] = y[3];
            dy[2] = -two_b * y[2] - lambda_spec * y[0];
            dy[3] = -two_b * y[3] - lambda_spec * y[1];
        };
        ode::integrate_dense<4>(rhs, z0, times, weights, opt,
                                [&](std::size_t k, const State& y) { route_b[k] = y; });
    }

    double residual = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double lam_s = shape.eval(s_times[k], 0);
        const State mapped = {route_a[k][0], route_a[k][1], route_a[k][2] / lam_s,
                              route_a[k][3] / lam_s};
        for (int c = 0; c < 4; ++c)
            residual = std::max(residual,
                                std::abs(mapped[c] - route_b[k][c]) / (1.0 + std::abs(mapped[c])));
    }
    return residual;
}

}  // namespace wavelab::asymptotics
