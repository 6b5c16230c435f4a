#pragma once

// Truncated Taylor-series arithmetic up to order 4. Used to evaluate exact
// derivatives of the coefficient families without finite differencing.

#include <array>
#include <cmath>
#include <stdexcept>

namespace wavelab {

struct Jet {
    static constexpr int order = 4;
    // Taylor coefficients: c[k] = f^(k)(t0) / k!
    std::array<double, order + 1> c{};

    static Jet constant(double v) {
        Jet j;
        j.c[0] = v;
        return j;
    }
    static Jet variable(double t0) {
        Jet j;
        j.c[0] = t0;
        j.c[1] = 1.0;
        return j;
    }

    double value() const { return c[0]; }
    double derivative(int k) const {
        if (k < 0 || k > order) throw std::out_of_range("Jet::derivative: order out of range");
        double fact = 1.0;
        for (int i = 2; i <= k; ++i) fact *= i;
        return c[k] * fact;
    }
};

inline Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= Jet::order; ++k) r.c[k] = a.c[k] + b.c[k];
    return r;
}

inline Jet operator-(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= Jet::order; ++k) r.c[k] = a.c[k] - b.c[k];
    return r;
}

inline Jet operator-(const Jet& a) {
    Jet r;
    for (int k = 0; k <= Jet::order; ++k) r.c[k] = -a.c[k];
    return r;
}

inline Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= Jet::order; ++k)
        for (int j = 0; j <= k; ++j) r.c[k] += a.c[j] * b.c[k - j];
    return r;
}

inline Jet operator*(double s, const Jet& a) {
    Jet r;
    for (int k = 0; k <= Jet::order; ++k) r.c[k] = s * a.c[k];
    return r;
}

inline Jet operator+(const Jet& a, double s) { return a + Jet::constant(s); }
inline Jet operator+(double s, const Jet& a) { return a + Jet::constant(s); }
inline Jet operator-(double s, const Jet& a) { return Jet::constant(s) - a; }
inline Jet operator-(const Jet& a, double s) { return a - Jet::constant(s); }

inline Jet operator/(const Jet& a, const Jet& b) {
    if (b.c[0] == 0.0) throw std::domain_error("Jet division by zero value");
    Jet q;
    for (int k = 0; k <= Jet::order; ++k) {
        double s = a.c[k];
        for (int j = 0; j < k; ++j) s -= q.c[j] * b.c[k - j];
        q.c[k] = s / b.c[0];
    }
    return q;
}

inline Jet exp(const Jet& a) {
    Jet e;
    e.c[0] = std::exp(a.c[0]);
    for (int k = 1; k <= Jet::order; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * a.c[j] * e.c[k - j];
        e.c[k] = s / k;
    }
    return e;
}

inline Jet log(const Jet& a) {
    if (a.c[0] <= 0.0) throw std::domain_error("Jet log of non-positive value");
    Jet l;
    l.c[0] = std::log(a.c[0]);
    for (int k = 1; k <= Jet::order; ++k) {
        double s = k * a.c[k];
        for (int j = 1; j < k; ++j) s -= j * l.c[j] * a.c[k - j];
        l.c[k] = s / (k * a.c[0]);
    }
    return l;
}

// sin and cos share the coupled recurrence; compute both at once.
inline void sincos(const Jet& a, Jet& s, Jet& c) {
    s.c.fill(0.0);
    c.c.fill(0.0);
    s.c[0] = std::sin(a.c[0]);
    c.c[0] = std::cos(a.c[0]);
    for (int k = 1; k <= Jet::order; ++k) {
        double ss = 0.0, cs = 0.0;
        for (int j = 1; j <= k; ++j) {
            ss += j * a.c[j] * c.c[k - j];
            cs += j * a.c[j] * s.c[k - j];
        }
        s.c[k] = ss / k;
        c.c[k] = -cs / k;
    }
}

inline Jet sin(const Jet& a) {
    Jet s, c;
    sincos(a, s, c);
    return s;
}

inline Jet cos(const Jet& a) {
    Jet s, c;
    sincos(a, s, c);
    return c;
}

inline Jet pow(const Jet& a, double r) {
    if (a.c[0] <= 0.0) throw std::domain_error("Jet pow requires positive base");
    return exp(r * log(a));
}

inline Jet sqrt(const Jet& a) { return pow(a, 0.5); }

}  // namespace wavelab
