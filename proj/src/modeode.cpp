#include "wavelab/modeode.hpp"

#include <cmath>

#include "wavelab/dopri5.hpp"

namespace wavelab::modeode {

namespace {

struct ModeRhs {
    double lam;
    const coeffs::CoefficientProfile* a;
    const coeffs::CoefficientProfile* b;
    const coeffs::CoefficientProfile* m;

    // y = [re v, im v, re v', im v']
    void operator()(double t, const std::array<double, 4>& y, std::array<double, 4>& dy) const {
        const double av = a->eval(t, 0);
        double c = av * av * lam;
        if (m) {
            const double mv = m->eval(t, 0);
            c += mv * mv;
        }
        const double bb = b ? b->eval(t, 0) : 0.0;
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = -2.0 * bb * y[2] - c * y[0];
        dy[3] = -2.0 * bb * y[3] - c * y[1];
    }
};

ode::StepOptions mode_options(const ModeParams& params, double t0, double t1, double tol) {
    ode::StepOptions opt;
    opt.rtol = tol;
    const double a_max = params.speed.sup_value(t0, t1);
    // oscillatory regime guard
    opt.h_max = 0.1 / (1.0 + a_max * std::sqrt(params.lambda_spec));
    return opt;
}

std::array<double, 4> error_weights(const ModeParams& params, double t0, double t1) {
    const double a_max = params.speed.sup_value(t0, t1);
    const double omega = 1.0 + a_max * std::sqrt(params.lambda_spec);
    return {1.0, 1.0, omega, omega};
}

}  // namespace

double FundamentalMatrix::spectral_radius() const {
    const double tr = trace(), dt = det();
    const double disc = tr * tr - 4.0 * dt;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return std::max(std::abs(0.5 * (tr + s)), std::abs(0.5 * (tr - s)));
    }
    return std::sqrt(std::abs(dt));  // complex pair
}

ModeTrajectory integrate_mode(const ModeParams& params, const ModeState& init,
                              const std::vector<double>& output_times, double tol) {
    if (output_times.empty() || output_times.front() < 0.0)
        throw std::invalid_argument("integrate_mode: output times must start at t0 >= 0");
    if (params.lambda_spec < 0.0)
        throw std::invalid_argument("integrate_mode: lambda_spec must be nonnegative");

    ModeTrajectory traj;
    traj.times = output_times;
    traj.states.resize(output_times.size());
    traj.tol_used = tol;

    const ModeRhs rhs{params.lambda_spec, &params.speed,
                      params.damping ? &*params.damping : nullptr,
                      params.mass ? &*params.mass : nullptr};
    const std::array<double, 4> y0 = {init.v.real(), init.v.imag(), init.v_dot.real(),
                                      init.v_dot.imag()};
    const auto opt = mode_options(params, output_times.front(), output_times.back(), tol);
    const auto w = error_weights(params, output_times.front(), output_times.back());
    ode::integrate_dense<4>(rhs, y0, output_times, w, opt,
                            [&](std::size_t i, const std::array<double, 4>& y) {
                                traj.states[i].v = {y[0], y[1]};
                                traj.states[i].v_dot = {y[2], y[3]};
                            });
    return traj;
}

FundamentalMatrix fundamental_matrix(const ModeParams& params, double t0, double t1, double tol) {
    if (!(t1 > t0)) throw std::invalid_argument("fundamental_matrix: need t1 > t0");
    // the two canonical columns ride as real/imaginary parts of one complex state
    ModeState init;
    init.v = {1.0, 0.0};
    init.v_dot = {0.0, 1.0};
    const auto traj = integrate_mode(params, init, {t0, t1}, tol);
    const ModeState& s = traj.states.back();
    FundamentalMatrix X;
    X.m[0][0] = s.v.real();
    X.m[0][1] = s.v.imag();
    X.m[1][0] = s.v_dot.real();
    X.m[1][1] = s.v_dot.imag();
    return X;
}

double mode_energy(const ModeState& state, double lambda_spec, double a_value, EnergyKind kind) {
    if (!(a_value > 0.0)) throw std::invalid_argument("mode_energy: a_value must be positive");
    const double w = (kind == EnergyKind::adapted) ? a_value * a_value : 1.0;
    return 0.5 * (w * lambda_spec * std::norm(state.v) + std::norm(state.v_dot));
}

}  // namespace wavelab::modeode
