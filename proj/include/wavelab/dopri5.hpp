#pragma once

// Embedded explicit Runge-Kutta pair of orders 5(4) with PI step-size
// control and 4th-order dense output. Fixed-dimension template so mode
// integrations stay allocation-free in the hot loop.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavelab::ode {

struct StepOptions {
    double rtol = 1e-10;
    double h_max = 0.1;
    double h_init = 0.0;  // 0 = choose automatically
};

class StepFailure : public std::runtime_error {
  public:
    StepFailure(const std::string& what, double t) : std::runtime_error(what), time(t) {}
    double time;
};

namespace dp {
// Dormand-Prince coefficients
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace dp

// Integrates y' = f(t, y) from out_times.front() to out_times.back(),
// emitting dense output at every requested time via emit(i, y).
// `weights` rescales components in the error norm (state amplitude per unit
// of component i); the norm is relative to the current solution size.
template <std::size_t N, class RHS, class Emit>
void integrate_dense(const RHS& f, const std::array<double, N>& y0,
                     const std::vector<double>& out_times, const std::array<double, N>& weights,
                     const StepOptions& opt, const Emit& emit) {
    if (out_times.size() < 1) throw std::invalid_argument("integrate_dense: empty output times");
    for (std::size_t i = 1; i < out_times.size(); ++i)
        if (out_times[i] <= out_times[i - 1])
            throw std::invalid_argument("integrate_dense: output times must increase");
    if (!(opt.rtol >= 1e-13 && opt.rtol <= 1e-4))
        throw std::invalid_argument("integrate_dense: rtol must lie in [1e-13, 1e-4]");

    using Vec = std::array<double, N>;
    double t = out_times.front();
    Vec y = y0;
    emit(std::size_t{0}, y);
    std::size_t next_out = 1;
    if (next_out >= out_times.size()) return;
    const double t_end = out_times.back();

    Vec k1, k2, k3, k4, k5, k6, k7, ynew, yerr;
    f(t, y, k1);

    double h = opt.h_init > 0 ? opt.h_init : std::min(opt.h_max, 1e-2);
    h = std::min(h, opt.h_max);
    double err_old = 1e-4;
    const double safe = 0.9, facmin = 0.2, facmax = 6.0, beta = 0.04, alpha = 0.2 - beta * 0.75;

    while (t < t_end) {
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw StepFailure("step size underflow at t=" + std::to_string(t), t);
        if (t + h > t_end) h = t_end - t;

        Vec tmp;
        using namespace dp;
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, tmp, k2);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, tmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, tmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, tmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(t + h, tmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        f(t + h, ynew, k7);
        for (std::size_t i = 0; i < N; ++i)
            yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

        // relative error norm against the scaled solution amplitude; the floor
        // keeps strongly damped solutions from stalling once they decay into
        // the denormal range, where the relative scale degenerates
        double amp = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            amp = std::max(amp, std::max(std::abs(y[i]), std::abs(ynew[i])) / weights[i]);
        if (amp > 0.0 && amp < 1e-280) amp = 1e-280;
        double err = 0.0;
        if (amp > 0.0) {
            for (std::size_t i = 0; i < N; ++i) {
                const double sc = opt.rtol * (weights[i] * amp);
                const double e = yerr[i] / sc;
                err += e * e;
            }
            err = std::sqrt(err / N);
        }

        if (err <= 1.0) {
            // dense output coefficients (Hairer's rcont1..5)
            Vec r2, r3, r4, r5;
            bool need_dense = next_out < out_times.size() && out_times[next_out] <= t + h;
            if (need_dense) {
                for (std::size_t i = 0; i < N; ++i) {
                    const double ydiff = ynew[i] - y[i];
                    const double bspl = h * k1[i] - ydiff;
                    r2[i] = ydiff;
                    r3[i] = bspl;
                    r4[i] = ydiff - h * k7[i] - bspl;
                    r5[i] = h * (dp::d1 * k1[i] + dp::d3 * k3[i] + dp::d4 * k4[i] + dp::d5 * k5[i] +
                                 dp::d6 * k6[i] + dp::d7 * k7[i]);
                }
                while (next_out < out_times.size() && out_times[next_out] <= t + h) {
                    const double theta = (out_times[next_out] - t) / h;
                    const double th1 = 1.0 - theta;
                    Vec yo;
                    for (std::size_t i = 0; i < N; ++i)
                        yo[i] = y[i] + theta * (r2[i] + th1 * (r3[i] + theta * (r4[i] + th1 * r5[i])));
                    if (out_times[next_out] == t + h) yo = ynew;
                    emit(next_out, yo);
                    ++next_out;
                }
            }
            t += h;
            y = ynew;
            k1 = k7;  // FSAL
            const double fac =
                (err == 0.0) ? facmax
                             : std::min(facmax, std::max(facmin, safe * std::pow(err, -alpha) *
                                                                      std::pow(err_old, beta)));
            h = std::min(h * fac, opt.h_max);
            err_old = std::max(err, 1e-4);
            if (next_out >= out_times.size()) return;
        } else {
            h *= std::max(facmin, safe * std::pow(err, -0.2));
        }
    }
}

}  // namespace wavelab::ode
