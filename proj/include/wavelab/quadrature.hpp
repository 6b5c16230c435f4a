#pragma once

// Small quadrature toolbox: adaptive Simpson for one-off integrals and
// fixed Gauss-Legendre panels for building spectral node grids.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace wavelab {

struct QuadratureResult {
    double value = 0.0;
    double achieved_tol = 0.0;
    bool converged = true;
};

namespace detail {

template <class F>
double simpson(const F& f, double a, double fa, double m, double fm, double b, double fb) {
    (void)f;
    (void)m;
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
void adaptive_step(const F& f, double a, double fa, double b, double fb, double m, double fm,
                   double whole, double tol, int depth, QuadratureResult& out) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, fa, lm, flm, m, fm);
    const double right = simpson(f, m, fm, rm, frm, b, fb);
    const double delta = left + right - whole;
    const double roundoff = 1e-15 * (std::abs(left) + std::abs(right));
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol || std::abs(delta) <= roundoff) {
        out.value += left + right + delta / 15.0;
        out.achieved_tol += std::abs(delta) / 15.0;
        if (depth <= 0 && std::abs(delta) > std::max(15.0 * tol, roundoff)) out.converged = false;
        return;
    }
    adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, out);
    adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b, double abs_tol = 1e-10,
                                    int max_depth = 48) {
    QuadratureResult out;
    if (a == b) return out;
    const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    const double whole = detail::simpson(f, a, fa, m, fm, b, fb);
    detail::adaptive_step(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth, out);
    return out;
}

// 8-point Gauss-Legendre rule on [-1, 1].
inline const std::array<double, 8>& gl8_nodes() {
    static const std::array<double, 8> x = {
        -0.96028985649753623, -0.79666647741362674, -0.52553240991632899, -0.18343464249564980,
        0.18343464249564980,  0.52553240991632899,  0.79666647741362674,  0.96028985649753623};
    return x;
}
inline const std::array<double, 8>& gl8_weights() {
    static const std::array<double, 8> w = {
        0.10122853629037626, 0.22238103445337447, 0.31370664587788729, 0.36268378337836198,
        0.36268378337836198, 0.31370664587788729, 0.22238103445337447, 0.10122853629037626};
    return w;
}

// Composite Gauss-Legendre nodes and weights on [a, b]; panel edges may be
// mapped through a monotone transform (e.g. log spacing) by the caller.
inline void gl_panels(const std::vector<double>& edges, std::vector<double>& nodes,
                      std::vector<double>& weights) {
    if (edges.size() < 2) throw std::invalid_argument("gl_panels: need at least one panel");
    nodes.clear();
    weights.clear();
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], b = edges[p + 1];
        const double h = 0.5 * (b - a), c = 0.5 * (a + b);
        for (int i = 0; i < 8; ++i) {
            nodes.push_back(c + h * gl8_nodes()[i]);
            weights.push_back(h * gl8_weights()[i]);
        }
    }
}

}  // namespace wavelab
