#include "wavelab/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wavelab/fitting.hpp"
#include "wavelab/quadrature.hpp"

namespace wavelab::floquet {

namespace {

modeode::ModeParams to_mode_params(const HillProblem& problem, double lambda_spec) {
    modeode::ModeParams p;
    p.lambda_spec = lambda_spec;
    p.speed = problem.speed;
    p.damping = problem.damping;
    p.mass = problem.mass;
    return p;
}

// stability reference: sqrt(det M) = exp(-int_0^T b); 1 in the damping-free case
double stability_reference(const modeode::FundamentalMatrix& M) {
    return std::sqrt(std::max(M.det(), 0.0));
}

double excess(const HillProblem& problem, double lambda_spec, double tol) {
    auto M = monodromy(problem, lambda_spec, tol);
    return M.spectral_radius() - stability_reference(M);
}

// root of excess between lo (stable) and hi (unstable), or the reverse
double bisect_boundary(const HillProblem& problem, double lo, double hi, bool lo_unstable,
                       double tol) {
    for (int it = 0; it < 64 && hi - lo > 1e-10 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const bool mid_unstable = excess(problem, mid, tol) > 0.0;
        if (mid_unstable == lo_unstable)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// growth rate measured against the Abel reference exp(-int_0^T b); equals the
// plain Floquet exponent in the damping-free case, positive inside intervals
double relative_rate(const HillProblem& problem, double lambda_spec, double tol) {
    auto M = monodromy(problem, lambda_spec, tol);
    const double rho = M.spectral_radius(), ref = stability_reference(M);
    if (rho <= ref) return 0.0;
    return std::log(rho / ref) / problem.period();
}

double peak_growth(const HillProblem& problem, double lo, double hi, double tol) {
    const int n = 33;
    double best_nu = 0.0, best_lam = 0.5 * (lo + hi);
    for (int i = 0; i <= n; ++i) {
        const double lam = lo + (hi - lo) * i / n;
        const double nu = relative_rate(problem, lam, tol);
        if (nu > best_nu) {
            best_nu = nu;
            best_lam = lam;
        }
    }
    // golden-section polish around the sampled maximum
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = std::max(lo, best_lam - (hi - lo) / n);
    double b = std::min(hi, best_lam + (hi - lo) / n);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = relative_rate(problem, x1, tol), f2 = relative_rate(problem, x2, tol);
    for (int it = 0; it < 25; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = relative_rate(problem, x2, tol);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = relative_rate(problem, x1, tol);
        }
    }
    return std::max(best_nu, std::max(f1, f2));
}

}  // namespace

double HillProblem::period() const {
    std::optional<double> T;
    auto take = [&](const std::optional<coeffs::CoefficientProfile>& prof) {
        if (!prof || !prof->period()) return;
        const double p = *prof->period();
        if (T && std::abs(*T - p) > 1e-12 * p)
            throw std::invalid_argument("HillProblem: coefficient periods differ");
        T = p;
    };
    take(speed);
    take(damping);
    take(mass);
    if (!T) throw std::invalid_argument("HillProblem: no periodic coefficient");
    return *T;
}

modeode::FundamentalMatrix monodromy(const HillProblem& problem, double lambda_spec, double tol) {
    if (lambda_spec < 0.0) throw std::invalid_argument("monodromy: lambda_spec must be >= 0");
    return modeode::fundamental_matrix(to_mode_params(problem, lambda_spec), 0.0,
                                       problem.period(), tol);
}

double discriminant(const HillProblem& problem, double lambda_spec, double tol) {
    return monodromy(problem, lambda_spec, tol).trace();
}

double growth_rate(const HillProblem& problem, double lambda_spec, double tol) {
    auto M = monodromy(problem, lambda_spec, tol);
    const double T = problem.period();
    if (!problem.damping && std::abs(M.trace()) <= 2.0) return 0.0;
    return std::log(M.spectral_radius()) / T;
}

std::vector<DiscriminantSample> discriminant_scan(const HillProblem& problem, double lambda_max,
                                                  int scan_points, double tol) {
    if (lambda_max <= 0.0) throw std::invalid_argument("discriminant_scan: lambda_max must be > 0");
    if (scan_points < 100) throw std::invalid_argument("discriminant_scan: need >= 100 points");
    const double T = problem.period();
    std::vector<DiscriminantSample> out;
    out.reserve(static_cast<std::size_t>(scan_points));
    for (int i = 1; i <= scan_points; ++i) {
        const double lam = lambda_max * i / scan_points;
        auto M = monodromy(problem, lam, tol);
        DiscriminantSample s;
        s.lambda_spec = lam;
        s.discriminant = M.trace();
        s.det_monodromy = M.det();
        const double rho = M.spectral_radius(), ref = stability_reference(M);
        s.growth_rate = (!problem.damping && rho <= ref) ? 0.0 : std::log(rho) / T;
        out.push_back(s);
    }
    return out;
}

std::vector<InstabilityInterval> instability_intervals(const HillProblem& problem,
                                                       double lambda_max, int scan_points,
                                                       double tol) {
    auto scan = discriminant_scan(problem, lambda_max, scan_points, tol);
    std::vector<InstabilityInterval> out;
    bool inside = false;
    double lower = 0.0;
    double prev_lam = lambda_max * 1e-9;  // lower fallback if the first sample is unstable
    for (const auto& s : scan) {
        // |trace| > 2 sqrt(det) <=> spectral radius above the Abel reference.
        // The threshold keeps integration noise at tangency points (where the
        // discriminant grazes the boundary) from opening spurious intervals.
        const double ref = std::sqrt(std::max(s.det_monodromy, 0.0));
        const bool unstable = std::abs(s.discriminant) > 2.0 * ref + 1e-7;
        if (unstable && !inside) {
            lower = bisect_boundary(problem, prev_lam, s.lambda_spec, false, tol);
            inside = true;
        } else if (!unstable && inside) {
            InstabilityInterval iv;
            iv.lower = lower;
            iv.upper = bisect_boundary(problem, prev_lam, s.lambda_spec, true, tol);
            iv.max_growth_rate = peak_growth(problem, iv.lower, iv.upper, tol);
            out.push_back(iv);
            inside = false;
        }
        prev_lam = s.lambda_spec;
    }
    if (inside) {
        InstabilityInterval iv;
        iv.lower = lower;
        iv.upper = lambda_max;
        iv.max_growth_rate = peak_growth(problem, iv.lower, iv.upper, tol);
        iv.truncated_at_scan_end = true;
        out.push_back(iv);
    }
    return out;
}

GrowthDemoResult yagdjian_demo(const HillProblem& problem, const InstabilityInterval& interval,
                               double horizon, int n_modes, double amplitude,
                               double diagnostic_time, double tol) {
    if (interval.max_growth_rate <= 0.0)
        throw std::invalid_argument("yagdjian_demo: interval has no positive growth rate");
    if (interval.upper <= interval.lower)
        throw std::invalid_argument("yagdjian_demo: empty interval");
    const double T = problem.period();
    if (horizon < 10.0 * T)
        throw std::invalid_argument("yagdjian_demo: horizon shorter than 10 periods");
    if (n_modes < 8) throw std::invalid_argument("yagdjian_demo: need at least 8 modes");

    // smooth bump weight with half the interval width, centered in the interval
    const double center = 0.5 * (interval.lower + interval.upper);
    const double half_width = 0.25 * (interval.upper - interval.lower);
    auto weight = [&](double lam) {
        const double s = (lam - center) / half_width;
        if (std::abs(s) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - s * s));
    };
    std::vector<double> edges;
    const int panels = std::max(1, n_modes / 8);
    for (int p = 0; p <= panels; ++p)
        edges.push_back(center - half_width + 2.0 * half_width * p / panels);
    std::vector<double> nodes, node_weights;
    gl_panels(edges, nodes, node_weights);

    if (diagnostic_time <= 0.0) diagnostic_time = horizon;
    std::vector<double> times;
    const int n_samples = 200;
    for (int i = 0; i <= n_samples; ++i) times.push_back(horizon * i / n_samples);
    times.push_back(diagnostic_time);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    // spectral-parameter quadrature and the bump weight fold into the node
    // weights; the ensemble machinery then assembles E(t) as usual
    spectral::SpectralData data;
    data.dimension = 1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        data.nodes.push_back(std::sqrt(nodes[i]));
        data.weights.push_back(node_weights[i] * weight(nodes[i]));
        data.u1_hat.push_back(amplitude);
        data.u2_hat.push_back(0.0);
    }
    auto trajectories =
        spectral::integrate_ensemble(data, to_mode_params(problem, 0.0), times, tol);
    GrowthDemoResult result;
    result.trace = spectral::plancherel_energy(data, trajectories, nullptr,
                                               spectral::TraceKind::plain);

    std::vector<double> fit_t, fit_log_e;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] >= 0.5 * horizon && result.trace.values[k] > 0.0) {
            fit_t.push_back(times[k]);
            fit_log_e.push_back(std::log(result.trace.values[k]));
        }
    }
    result.fitted_rate = linear_fit(fit_t, fit_log_e).slope;
    result.expected_rate = 2.0 * interval.max_growth_rate;
    result.diagnostic_time = diagnostic_time;
    const auto it = std::lower_bound(times.begin(), times.end(), diagnostic_time);
    const double e_diag = result.trace.values[static_cast<std::size_t>(it - times.begin())];
    result.log_energy_ratio = std::log(e_diag) / std::log(diagnostic_time);
    return result;
}

}  // namespace wavelab::floquet
