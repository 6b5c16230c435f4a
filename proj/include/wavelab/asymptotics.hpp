#pragma once

// Diffusion-phenomenon comparisons against the parabolic surrogate, numeric
// estimation of the surrogate constants (alpha, beta), and the Liouville
// change of variables between increasing speed and dissipation.

#include <complex>
#include <vector>

#include "wavelab/coeffs.hpp"
#include "wavelab/modeode.hpp"
#include "wavelab/spectral.hpp"

namespace wavelab::asymptotics {

// Heat flow w_t = alpha * Laplacian w with data w(0) = u1 + beta * u2;
// per mode the closed form w_hat = (u1_hat + beta u2_hat) exp(-alpha lam t).
struct HeatSurrogate {
    double alpha = 1.0;
    double beta = 1.0;

    std::complex<double> mode(std::complex<double> u1_hat, std::complex<double> u2_hat,
                              double lambda_spec, double t) const;
};

// L^2 deficit ||u(t) - w(t)|| assembled by Plancherel from the per-node
// differences. include_free_wave adds the exponentially-weighted free wave
// e^{-t/2} v of the same data (three-term comparison, valid for 2b = 1).
spectral::EnergyTrace diffusion_deficit(const spectral::SpectralData& data,
                                        const std::vector<modeode::ModeTrajectory>& trajectories,
                                        const HeatSurrogate& surrogate,
                                        bool include_free_wave = false);

struct AlphaBetaEstimate {
    double alpha_hat = 0.0;
    double beta_hat = 0.0;
    bool valid = false;  // alpha_hat > 0 and a clean ladder
    struct Rung {
        double lambda_spec;
        double nu_slow;    // slow Floquet exponent, -> 0 as lambda -> 0
        double alpha_raw;  // -nu_slow / lambda
        double beta_raw;
    };
    std::vector<Rung> ladder;
    double alpha_residual = 0.0;  // change under the last extrapolation step
    double beta_residual = 0.0;
};

// Small-lambda Floquet extrapolation on the ladder lambda_k = lambda0 4^-k:
// alpha from the Richardson limit of -nu_slow/lambda, beta from the slow-
// eigenvector projections of the unit initial data.
AlphaBetaEstimate estimate_alpha_beta(const coeffs::CoefficientProfile& damping,
                                      double lambda0 = 0.1, int rungs = 9);

// Monotone time change Lambda(s) = 1 + int_0^s shape, with the safeguarded
// inverse used by the Liouville transform.
class LiouvilleMap {
  public:
    explicit LiouvilleMap(coeffs::CoefficientProfile shape);

    const coeffs::CoefficientProfile& shape() const { return shape_; }
    double forward(double s) const;  // Lambda(s)
    double inverse(double t) const;  // t >= 1

  private:
    coeffs::CoefficientProfile shape_;
    double primitive_at_zero_;
};

// Damping generated by the transform: 2 b(t) = shape'(s) / shape(s)^2 at
// s = Lambda^-1(t). Evaluable profile, not a named coefficient family.
class DerivedDamping {
  public:
    explicit DerivedDamping(coeffs::CoefficientProfile shape);
    double eval(double t) const;
    const LiouvilleMap& map() const { return map_; }

  private:
    LiouvilleMap map_;
};

DerivedDamping liouville_damping(const coeffs::CoefficientProfile& shape);

// Integrates the speed problem v'' + shape(s)^2 lambda_spec v = 0, maps it
// through Lambda, integrates the damped problem with the derived damping, and
// returns the largest normalized state difference over the horizon.
double liouville_verify(const coeffs::CoefficientProfile& shape, double lambda_spec,
                        const modeode::ModeState& init, double horizon, double tol = 1e-8);

}  // namespace wavelab::asymptotics
