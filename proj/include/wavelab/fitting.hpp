#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace wavelab {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need at least two points");
    const std::size_t n = x.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissa");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    // rounding leaves syy ~ 1e-33 on exactly-flat data; treat that as perfect
    const double syy_floor = 1e-20 * static_cast<double>(n) * std::max(1.0, my * my);
    f.r_squared = (syy <= syy_floor) ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

}  // namespace wavelab
