#pragma once

// Mode-ensemble assembly: Plancherel energies in dimensions 1..3, spatial
// synthesis (1-D Fourier, 3-D radial sine transform), L^q norms and data
// norms for the decay-rate checks.

#include <complex>
#include <optional>
#include <vector>

#include "wavelab/coeffs.hpp"
#include "wavelab/modeode.hpp"

namespace wavelab::spectral {

enum class TraceKind { plain, adapted, weighted };

struct EnergyTrace {
    std::vector<double> times;
    std::vector<double> values;
    TraceKind kind = TraceKind::plain;
};

// Discretized spectral content of one Cauchy data pair. Nodes are radial
// frequencies rho > 0 (signed xi for dimension 1); the Plancherel measure
// factor c_n rho^(n-1) is folded into the weights, so sum w_i |u_hat_i|^2
// is the spatial L^2 norm squared.
struct SpectralData {
    int dimension = 3;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<std::complex<double>> u1_hat;
    std::vector<std::complex<double>> u2_hat;

    void validate() const;
    std::size_t size() const { return nodes.size(); }
};

struct FrequencyGrid {
    double rho_min = 1e-3;
    double rho_max = 20.0;
    int count = 512;
    // log_trapezoid: uniform in log rho (doubly-decaying integrands make the
    // trapezoid rule spectrally accurate there); uniform: equispaced in rho,
    // needed when synthesis must resolve sin(r rho) at large r.
    enum class Spacing { log_trapezoid, uniform } spacing = Spacing::log_trapezoid;
};

// Gaussian profile exp(-|x|^2 / (2 width^2)) scaled by amplitude; transform
// amplitude^ (x) = amplitude (sqrt(2 pi) width)^n exp(-width^2 rho^2 / 2).
struct GaussianPair {
    double width1 = 1.0;
    double amplitude1 = 1.0;
    double width2 = 1.0;
    double amplitude2 = 0.0;
};

SpectralData gaussian_data(int dimension, const GaussianPair& pair, const FrequencyGrid& grid);

// Uniform symmetric signed xi-grid for 1-D synthesis round trips.
SpectralData gaussian_data_1d_signed(const GaussianPair& pair, double xi_max, int count);

struct FieldSnapshot {
    double t = 0.0;
    std::vector<double> grid;
    std::vector<std::complex<double>> values;
    bool under_resolved = false;
};

// Evolves every node of the mode equation with initial data (u1_hat, u2_hat);
// lambda_spec = node^2. Deterministic for any thread count: each node writes
// its own slot.
std::vector<modeode::ModeTrajectory> integrate_ensemble(
    const SpectralData& data, const modeode::ModeParams& base,
    const std::vector<double>& output_times, double tol = 1e-10, int n_threads = 1);

EnergyTrace plancherel_energy(const SpectralData& data,
                              const std::vector<modeode::ModeTrajectory>& trajectories,
                              const coeffs::CoefficientProfile* speed, TraceKind kind);

// L^2 norm traces of u, grad u or u_t straight from the mode amplitudes.
enum class Quantity { field, gradient, velocity };

EnergyTrace l2_norm_trace(const SpectralData& data,
                          const std::vector<modeode::ModeTrajectory>& trajectories,
                          Quantity quantity);

// amplitudes: per-node spectral values at one time (v or v_dot).
FieldSnapshot synthesize_1d(const SpectralData& data,
                            const std::vector<std::complex<double>>& amplitudes,
                            const std::vector<double>& x_grid, double t = 0.0);

FieldSnapshot synthesize_radial3d(const SpectralData& data,
                                  const std::vector<std::complex<double>>& amplitudes,
                                  const std::vector<double>& r_grid, double t = 0.0);

// trapezoid in |values|^q with the radial 4 pi r^2 weight for dimension 3;
// q = infinity returns the max modulus.
double lq_norm(const FieldSnapshot& snapshot, double q, int dimension);

// true when the boundary samples exceed threshold * peak: the grid misses
// part of the field's support and lq_norm underestimates.
bool support_truncated(const FieldSnapshot& snapshot, double threshold = 1e-10);

enum class DataComponent { u1, u2 };

// Sobolev data norm <D>^regularity applied to one component: p=2 by weighted
// Plancherel, p=1 by synthesis on an automatic conjugate grid.
double data_norm(const SpectralData& data, double regularity, int p,
                 DataComponent component = DataComponent::u1);

std::vector<std::complex<double>> states_at(const std::vector<modeode::ModeTrajectory>& trajectories,
                                            std::size_t time_index, Quantity quantity);

}  // namespace wavelab::spectral
