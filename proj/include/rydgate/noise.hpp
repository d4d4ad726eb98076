#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rydgate/model.hpp"
#include "rydgate/propagator.hpp"

// Fidelity sensitivity to relative parameter errors and detuning, and
// Monte-Carlo averages over Gaussian parameter noise.

namespace rydgate {

struct DesignPoint {
    double omega_e = 10.0;
    double omega0 = 0.0;
    double v = 0.0;
    double t_p = 1.0;
    double window_halfwidth = 4.5;

    SystemParams system(double delta = 0.0) const;
};

enum class NoiseParameter { Omega0, V, OmegaE };
std::string to_string(NoiseParameter p);
NoiseParameter parse_noise_parameter(const std::string& name);  // "omega0", "v", "omega_e"

struct SensitivityCoeffs {
    double beta_omega0 = 0.0;
    double beta_v = 0.0;
    double beta_omega_e = 0.0;

    double operator[](NoiseParameter p) const;
};

// Quadratic-loss coefficients 1 - F ~ sum beta_chi eps_chi^2 for x = omega_e t_p.
SensitivityCoeffs sensitivity_coeffs(double omega_e_tp);

struct CurvePoint {
    double x = 0.0;         // epsilon or Delta / V
    double fidelity = 0.0;  // NaN when the point failed
    std::string reason;
};

struct EvalOptions {
    double tol = kDefaultTolerance;
    int threads = 0;
};

// F at chi = chi_opt (1 + eps) for each eps, other parameters at the design point.
std::vector<CurvePoint> fidelity_vs_relative_error(const DesignPoint& dp, NoiseParameter chi,
                                                   const std::vector<double>& epsilons,
                                                   const EvalOptions& options = {});

// F with one-photon detuning Delta = r V for each r.
std::vector<CurvePoint> fidelity_vs_detuning(const DesignPoint& dp, const std::vector<double>& delta_over_v,
                                             const EvalOptions& options = {});

// Least squares of 1 - F = b eps^2 (no free offset); R^2 of the model for F.
struct QuadraticFit {
    double coefficient = 0.0;
    double r_squared = 0.0;
    int points = 0;
};
QuadraticFit fit_quadratic_loss(const std::vector<CurvePoint>& curve);

struct NoiseSpec {
    double sigma_omega0 = 0.01;
    double sigma_v = 0.03;
    double sigma_omega_e = 0.0;
    int samples = 1000;
    std::uint64_t seed = 12345;
    double truncation = 5.0;  // normal draws beyond this many sigma are redrawn
};
void validate(const NoiseSpec& spec);

// 1 - sum beta_chi sigma_chi^2
double quadratic_model_mean(const SensitivityCoeffs& c, const NoiseSpec& spec);

struct Histogram {
    std::vector<double> edges;  // bins + 1 edges
    std::vector<int> counts;
};
Histogram make_histogram(const std::vector<double>& data, int bins);

struct MonteCarloResult {
    double mean = 0.0;
    double std = 0.0;             // sample standard deviation
    double standard_error = 0.0;  // std / sqrt(n)
    int n = 0;
    int failed = 0;
    std::uint64_t seed = 0;
    std::vector<double> fidelities;  // in sample order
    Histogram histogram;
};

// Relative errors for sample `index`; depends only on (seed, index).
struct RelativeErrors {
    double omega0;
    double v;
    double omega_e;
};
RelativeErrors draw_relative_errors(const NoiseSpec& spec, std::uint64_t index);

MonteCarloResult monte_carlo_fidelity(const DesignPoint& dp, const NoiseSpec& spec,
                                      const EvalOptions& options = {}, int histogram_bins = 40);

// bin_left,bin_right,count
void write_histogram_csv(std::ostream& os, const Histogram& h);
nlohmann::json summary_json(const MonteCarloResult& r);

}  // namespace rydgate
