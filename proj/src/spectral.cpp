#include "wavelab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wavelab/parallel.hpp"

namespace wavelab::spectral {

namespace {

const double pi = std::numbers::pi;

// Plancherel surface factor: sum w |u_hat|^2 over nodes equals the spatial
// L^2 norm squared with the (2 pi)^-n transform convention.
double plancherel_factor(int dimension, double rho) {
    switch (dimension) {
        case 1: return 1.0 / pi;  // two signed half-lines folded onto rho > 0
        case 2: return rho / (2.0 * pi);
        case 3: return rho * rho / (2.0 * pi * pi);
    }
    throw std::invalid_argument("spectral: dimension must be 1, 2 or 3");
}

void check_trajectories(const SpectralData& data,
                        const std::vector<modeode::ModeTrajectory>& trajectories) {
    if (trajectories.size() != data.size())
        throw std::invalid_argument("spectral: one trajectory per node required");
    if (trajectories.empty()) throw std::invalid_argument("spectral: empty ensemble");
    const auto& times = trajectories.front().times;
    for (const auto& traj : trajectories)
        if (traj.times != times)
            throw std::invalid_argument("spectral: trajectories must share output times");
}

double max_node_spacing(const std::vector<double>& nodes) {
    double h = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i) h = std::max(h, nodes[i] - nodes[i - 1]);
    return h;
}

}  // namespace

void SpectralData::validate() const {
    if (dimension < 1 || dimension > 3)
        throw std::invalid_argument("SpectralData: dimension must be 1, 2 or 3");
    if (nodes.empty()) throw std::invalid_argument("SpectralData: no nodes");
    if (weights.size() != nodes.size() || u1_hat.size() != nodes.size() ||
        u2_hat.size() != nodes.size())
        throw std::invalid_argument("SpectralData: field lengths differ");
    if (!std::is_sorted(nodes.begin(), nodes.end()))
        throw std::invalid_argument("SpectralData: nodes must be sorted");
    for (double w : weights)
        if (!(w > 0.0)) throw std::invalid_argument("SpectralData: weights must be positive");
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (!std::isfinite(u1_hat[i].real()) || !std::isfinite(u1_hat[i].imag()) ||
            !std::isfinite(u2_hat[i].real()) || !std::isfinite(u2_hat[i].imag()))
            throw std::invalid_argument("SpectralData: amplitudes must be finite");
    if (dimension > 1 && nodes.front() <= 0.0)
        throw std::invalid_argument("SpectralData: radial nodes must be positive");
}

SpectralData gaussian_data(int dimension, const GaussianPair& pair, const FrequencyGrid& grid) {
    if (grid.count < 2) throw std::invalid_argument("gaussian_data: need at least 2 nodes");
    if (!(0.0 < grid.rho_min && grid.rho_min < grid.rho_max))
        throw std::invalid_argument("gaussian_data: need 0 < rho_min < rho_max");
    SpectralData data;
    data.dimension = dimension;
    data.nodes.resize(static_cast<std::size_t>(grid.count));
    data.weights.resize(data.nodes.size());
    const int n = grid.count;
    for (int i = 0; i < n; ++i) {
        double rho, q;
        if (grid.spacing == FrequencyGrid::Spacing::log_trapezoid) {
            const double dy = std::log(grid.rho_max / grid.rho_min) / (n - 1);
            rho = grid.rho_min * std::exp(i * dy);
            q = rho * dy * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
        } else {
            const double dr = (grid.rho_max - grid.rho_min) / (n - 1);
            rho = grid.rho_min + i * dr;
            q = dr * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
        }
        data.nodes[static_cast<std::size_t>(i)] = rho;
        data.weights[static_cast<std::size_t>(i)] = plancherel_factor(dimension, rho) * q;
    }
    const double c1 = pair.amplitude1 * std::pow(std::sqrt(2.0 * pi) * pair.width1, dimension);
    const double c2 = pair.amplitude2 * std::pow(std::sqrt(2.0 * pi) * pair.width2, dimension);
    for (double rho : data.nodes) {
        data.u1_hat.push_back(c1 * std::exp(-0.5 * pair.width1 * pair.width1 * rho * rho));
        data.u2_hat.push_back(c2 * std::exp(-0.5 * pair.width2 * pair.width2 * rho * rho));
    }
    data.validate();
    return data;
}

SpectralData gaussian_data_1d_signed(const GaussianPair& pair, double xi_max, int count) {
    if (count < 3) throw std::invalid_argument("gaussian_data_1d_signed: need at least 3 nodes");
    if (xi_max <= 0.0) throw std::invalid_argument("gaussian_data_1d_signed: xi_max must be > 0");
    SpectralData data;
    data.dimension = 1;
    const double dxi = 2.0 * xi_max / (count - 1);
    const double c1 = pair.amplitude1 * std::sqrt(2.0 * pi) * pair.width1;
    const double c2 = pair.amplitude2 * std::sqrt(2.0 * pi) * pair.width2;
    for (int i = 0; i < count; ++i) {
        const double xi = -xi_max + i * dxi;
        data.nodes.push_back(xi);
        data.weights.push_back(dxi / (2.0 * pi) * ((i == 0 || i == count - 1) ? 0.5 : 1.0));
        data.u1_hat.push_back(c1 * std::exp(-0.5 * pair.width1 * pair.width1 * xi * xi));
        data.u2_hat.push_back(c2 * std::exp(-0.5 * pair.width2 * pair.width2 * xi * xi));
    }
    return data;
}

std::vector<modeode::ModeTrajectory> integrate_ensemble(const SpectralData& data,
                                                        const modeode::ModeParams& base,
                                                        const std::vector<double>& output_times,
                                                        double tol, int n_threads) {
    data.validate();
    std::vector<modeode::ModeTrajectory> out(data.size());
    parallel_for(data.size(), n_threads, [&](std::size_t i) {
        modeode::ModeParams p = base;
        p.lambda_spec = data.nodes[i] * data.nodes[i];
        out[i] = modeode::integrate_mode(p, {data.u1_hat[i], data.u2_hat[i]}, output_times, tol);
    });
    return out;
}

EnergyTrace plancherel_energy(const SpectralData& data,
                              const std::vector<modeode::ModeTrajectory>& trajectories,
                              const coeffs::CoefficientProfile* speed, TraceKind kind) {
    if (kind == TraceKind::weighted)
        throw std::invalid_argument("plancherel_energy: weighted traces are derived, not assembled");
    check_trajectories(data, trajectories);
    EnergyTrace trace;
    trace.times = trajectories.front().times;
    trace.kind = kind;
    trace.values.assign(trace.times.size(), 0.0);
    const auto energy_kind =
        kind == TraceKind::adapted ? modeode::EnergyKind::adapted : modeode::EnergyKind::plain;
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
        const double a = (kind == TraceKind::adapted && speed) ? speed->eval(trace.times[k], 0) : 1.0;
        double sum = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double lam = data.nodes[i] * data.nodes[i];
            sum += data.weights[i] *
                   modeode::mode_energy(trajectories[i].states[k], lam, a, energy_kind);
        }
        trace.values[k] = sum;
    }
    return trace;
}

EnergyTrace l2_norm_trace(const SpectralData& data,
                          const std::vector<modeode::ModeTrajectory>& trajectories,
                          Quantity quantity) {
    check_trajectories(data, trajectories);
    EnergyTrace trace;
    trace.times = trajectories.front().times;
    trace.kind = TraceKind::plain;
    trace.values.assign(trace.times.size(), 0.0);
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto& s = trajectories[i].states[k];
            double density = 0.0;
            switch (quantity) {
                case Quantity::field: density = std::norm(s.v); break;
                case Quantity::gradient:
                    density = data.nodes[i] * data.nodes[i] * std::norm(s.v);
                    break;
                case Quantity::velocity: density = std::norm(s.v_dot); break;
            }
            sum += data.weights[i] * density;
        }
        trace.values[k] = std::sqrt(sum);
    }
    return trace;
}

FieldSnapshot synthesize_1d(const SpectralData& data,
                            const std::vector<std::complex<double>>& amplitudes,
                            const std::vector<double>& x_grid, double t) {
    if (data.dimension != 1) throw std::invalid_argument("synthesize_1d: dimension must be 1");
    if (amplitudes.size() != data.size())
        throw std::invalid_argument("synthesize_1d: amplitude count mismatch");
    FieldSnapshot snap;
    snap.t = t;
    snap.grid = x_grid;
    snap.values.assign(x_grid.size(), 0.0);
    double x_extent = 0.0;
    for (double x : x_grid) x_extent = std::max(x_extent, std::abs(x));
    snap.under_resolved = max_node_spacing(data.nodes) * x_extent > pi;
    const bool signed_grid = data.nodes.front() < 0.0;
    for (std::size_t j = 0; j < x_grid.size(); ++j) {
        std::complex<double> sum = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (signed_grid) {
                sum += data.weights[i] * amplitudes[i] *
                       std::exp(std::complex<double>(0.0, data.nodes[i] * x_grid[j]));
            } else {
                // positive radial nodes represent even data: cosine synthesis
                sum += data.weights[i] * amplitudes[i] * std::cos(data.nodes[i] * x_grid[j]);
            }
        }
        snap.values[j] = sum;
    }
    return snap;
}

FieldSnapshot synthesize_radial3d(const SpectralData& data,
                                  const std::vector<std::complex<double>>& amplitudes,
                                  const std::vector<double>& r_grid, double t) {
    if (data.dimension != 3)
        throw std::invalid_argument("synthesize_radial3d: dimension must be 3");
    if (amplitudes.size() != data.size())
        throw std::invalid_argument("synthesize_radial3d: amplitude count mismatch");
    FieldSnapshot snap;
    snap.t = t;
    snap.grid = r_grid;
    snap.values.assign(r_grid.size(), 0.0);
    double r_max = 0.0;
    for (double r : r_grid) {
        if (r < 0.0) throw std::invalid_argument("synthesize_radial3d: r must be >= 0");
        r_max = std::max(r_max, r);
    }
    snap.under_resolved = max_node_spacing(data.nodes) * r_max > pi;
    for (std::size_t j = 0; j < r_grid.size(); ++j) {
        const double r = r_grid[j];
        std::complex<double> sum = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double rho = data.nodes[i];
            // sin(r rho)/(r rho) -> 1 as r -> 0 (separate limit at the origin)
            const double kernel = r == 0.0 ? 1.0 : std::sin(r * rho) / (r * rho);
            sum += data.weights[i] * amplitudes[i] * kernel;
        }
        snap.values[j] = sum;
    }
    return snap;
}

double lq_norm(const FieldSnapshot& snapshot, double q, int dimension) {
    if (dimension != 1 && dimension != 3)
        throw std::invalid_argument("lq_norm: only dimensions 1 and 3 are synthesized");
    if (snapshot.grid.size() < 2) throw std::invalid_argument("lq_norm: need at least 2 samples");
    if (std::isinf(q)) {
        double peak = 0.0;
        for (const auto& v : snapshot.values) peak = std::max(peak, std::abs(v));
        return peak;
    }
    if (q < 1.0) throw std::invalid_argument("lq_norm: q must be >= 1");
    double integral = 0.0;
    for (std::size_t j = 1; j < snapshot.grid.size(); ++j) {
        const double h = snapshot.grid[j] - snapshot.grid[j - 1];
        auto density = [&](std::size_t i) {
            double d = std::pow(std::abs(snapshot.values[i]), q);
            if (dimension == 3) d *= 4.0 * pi * snapshot.grid[i] * snapshot.grid[i];
            return d;
        };
        integral += 0.5 * h * (density(j - 1) + density(j));
    }
    return std::pow(integral, 1.0 / q);
}

bool support_truncated(const FieldSnapshot& snapshot, double threshold) {
    double peak = 0.0;
    for (const auto& v : snapshot.values) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return false;
    return std::abs(snapshot.values.back()) > threshold * peak;
}

double data_norm(const SpectralData& data, double regularity, int p, DataComponent component) {
    data.validate();
    const auto& amp = component == DataComponent::u1 ? data.u1_hat : data.u2_hat;
    if (p == 2) {
        double sum = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double xi2 = data.nodes[i] * data.nodes[i];
            sum += data.weights[i] * std::pow(1.0 + xi2, regularity) * std::norm(amp[i]);
        }
        return std::sqrt(sum);
    }
    if (p != 1) throw std::invalid_argument("data_norm: p must be 1 or 2");
    if (regularity != 0.0)
        throw std::invalid_argument("data_norm: p=1 supports regularity 0 only");
    if (data.dimension == 2) throw std::invalid_argument("data_norm: no 2-D synthesis");
    // grow the spatial window until the tail is negligible
    for (double extent = 10.0; extent <= 1.6e4; extent *= 2.0) {
        const std::size_t n_pts = 2048;
        std::vector<double> grid;
        FieldSnapshot snap;
        if (data.dimension == 1) {
            for (std::size_t j = 0; j < n_pts; ++j)
                grid.push_back(-extent + 2.0 * extent * j / (n_pts - 1));
            snap = synthesize_1d(data, amp, grid);
        } else {
            for (std::size_t j = 0; j < n_pts; ++j) grid.push_back(extent * j / (n_pts - 1));
            snap = synthesize_radial3d(data, amp, grid);
        }
        // threshold sits above the trapezoid endpoint-noise floor of the
        // synthesis (~h^2), which does not decay with the window size
        if (!support_truncated(snap, 1e-7)) return lq_norm(snap, 1.0, data.dimension);
    }
    throw std::runtime_error("data_norm: spatial support not covered by the synthesis window");
}

std::vector<std::complex<double>> states_at(const std::vector<modeode::ModeTrajectory>& trajectories,
                                            std::size_t time_index, Quantity quantity) {
    if (quantity == Quantity::gradient)
        throw std::invalid_argument("states_at: gradient fields are not synthesized");
    std::vector<std::complex<double>> out;
    out.reserve(trajectories.size());
    for (const auto& traj : trajectories) {
        if (time_index >= traj.states.size())
            throw std::out_of_range("states_at: time index out of range");
        out.push_back(quantity == Quantity::field ? traj.states[time_index].v
                                                  : traj.states[time_index].v_dot);
    }
    return out;
}

}  // namespace wavelab::spectral
