#pragma once

// Single Fourier mode of the wave model: v'' + 2 b(t) v' + (a^2(t) lam + m^2(t)) v = 0
// with spectral parameter lam = |xi|^2. Provides trajectories, fundamental
// matrices and mode energies.

#include <complex>
#include <optional>
#include <vector>

#include "wavelab/coeffs.hpp"

namespace wavelab::modeode {

struct ModeParams {
    double lambda_spec = 0.0;
    coeffs::CoefficientProfile speed = coeffs::CoefficientProfile::constant(1.0);
    std::optional<coeffs::CoefficientProfile> damping;
    std::optional<coeffs::CoefficientProfile> mass;
};

struct ModeState {
    std::complex<double> v{};
    std::complex<double> v_dot{};
};

struct ModeTrajectory {
    std::vector<double> times;
    std::vector<ModeState> states;
    double tol_used = 0.0;
};

struct FundamentalMatrix {
    // maps (v, v') at t0 to (v, v') at t1
    double m[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
    double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
    double trace() const { return m[0][0] + m[1][1]; }
    // modulus of the largest eigenvalue
    double spectral_radius() const;
};

ModeTrajectory integrate_mode(const ModeParams& params, const ModeState& init,
                              const std::vector<double>& output_times, double tol = 1e-10);

FundamentalMatrix fundamental_matrix(const ModeParams& params, double t0, double t1,
                                     double tol = 1e-10);

enum class EnergyKind { plain, adapted };

// plain: (lam |v|^2 + |v'|^2)/2; adapted: (a^2 lam |v|^2 + |v'|^2)/2.
double mode_energy(const ModeState& state, double lambda_spec, double a_value, EnergyKind kind);

}  // namespace wavelab::modeode
