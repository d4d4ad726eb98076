#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rydgate/model.hpp"
#include "rydgate/propagator.hpp"

// Parameter solvers for target phases and the sweep engine for phase,
// gate-metric and fidelity maps.

namespace rydgate {

struct SweepAxis {
    std::string name;
    std::vector<double> values;  // sorted ascending
};

// n points from lo to hi inclusive (n = 1 gives {lo}).
SweepAxis linspace_axis(std::string name, double lo, double hi, int n);

struct SweepGrid {
    SweepAxis x;
    SweepAxis y;
    std::string metric;
    std::vector<double> values;        // row-major, y outer
    std::vector<std::string> reasons;  // empty unless the cell failed (then value is NaN)

    SweepGrid() = default;
    SweepGrid(SweepAxis x_axis, SweepAxis y_axis, std::string metric_name);

    std::size_t nx() const { return x.values.size(); }
    std::size_t ny() const { return y.values.size(); }
    double& at(std::size_t iy, std::size_t ix) { return values[iy * nx() + ix]; }
    double at(std::size_t iy, std::size_t ix) const { return values[iy * nx() + ix]; }
    void fail(std::size_t iy, std::size_t ix, const std::string& reason);
    std::size_t failed_cells() const;
};

// "metric,x-name,y-name" then one "y,x,cell" line per cell, y outer.
void write_grid_csv(std::ostream& os, const SweepGrid& g);
// NaN cells become null; failures listed with their reasons.
nlohmann::json grid_to_json(const SweepGrid& g);

struct Bracket {
    double lo;
    double hi;
};

struct RootOptions {
    int ladder_intervals = 64;      // continuation samples across the bracket
    double residual_tol = 1e-6;     // accepted |f(root)| in rad
    double tol = kDefaultTolerance; // propagation tolerance
};

struct RootResult {
    double root = 0.0;
    double residual = 0.0;  // phase(root) - target
    int evaluations = 0;
};

// Generic continuation + bisection on f over [lo, hi]: f is sampled on a
// uniform ladder starting at lo, and the first ladder segment with a sign
// change that bisects to |f| <= residual_tol is returned. Segments where the
// sign change is a jump rather than a root are skipped.
RootResult continuation_root(const std::function<double(double)>& f, Bracket bracket,
                             const RootOptions& options = {});

// Omega0 with alpha(Omega0) = alpha_target (unwrapped). Omega0 in `base` is ignored.
RootResult solve_omega0_for_alpha(const SystemParams& base, double alpha_target, Bracket bracket,
                                  const RootOptions& options = {});
RootResult solve_omega0_for_alpha(double omega_e, double alpha_target, Bracket bracket,
                                  const RootOptions& options = {});

// V with beta(V) = beta_target at fixed (omega_e, Omega0). V in `base` is ignored.
// A bracket containing V = 2 omega_e is split there.
RootResult solve_v_for_beta(const SystemParams& base, double beta_target, Bracket bracket,
                            const RootOptions& options = {});
RootResult solve_v_for_beta(double omega_e, double omega0, double beta_target, Bracket bracket,
                            const RootOptions& options = {});

struct AnalyticOptimum {
    double omega0;
    double v;
};
// ((128 pi)^{1/4} sqrt(omega_e / t_p), 2 omega_e + 16 sqrt(pi) / t_p)
AnalyticOptimum analytic_optimum(double omega_e, double t_p = 1.0);

struct SweepOptions {
    double tol = kDefaultTolerance;
    int threads = 0;  // resolved through resolve_threads
    double t_p = 1.0;
    double window_halfwidth = 4.5;
};

struct PhaseMaps {
    SweepGrid alpha;
    SweepGrid beta;
    SweepGrid return_population_single;
    SweepGrid return_population_triple;
};
// x = omega_e, y = Omega0.
PhaseMaps sweep_phase_maps(const SweepAxis& omega_e, const SweepAxis& omega0, double v,
                           const SweepOptions& options = {});

struct GateMaps {
    SweepGrid fidelity;
    SweepGrid entangling_power;
    SweepGrid alpha;
    SweepGrid beta;
};
// x = omega_e, y = Omega0 / V.
GateMaps sweep_gate_metrics(const SweepAxis& omega_e, const SweepAxis& ratio, double v,
                            const SweepOptions& options = {});

struct FidelityLandscapeSpec {
    SweepAxis omega_e;
    SweepAxis v;
    double alpha_target = 0.0;
    double beta_target = 0.0;
    Bracket omega0_bracket{0.0, 60.0};
    Bracket v_bracket{0.0, 200.0};
    bool locus = true;
    bool locus_above_resonance = true;  // search the locus only for V > 2 omega_e
};

struct FidelityLandscape {
    SweepGrid fidelity;    // x = omega_e, y = V
    SweepGrid population;  // |11> return population
    // per omega_e column: solved Omega0 and the V where beta = beta_target
    std::vector<double> omega0_opt;
    std::vector<std::string> omega0_reason;
    std::vector<double> locus_v;
    std::vector<std::string> locus_reason;
};
FidelityLandscape sweep_fidelity_vs_v_omega(const FidelityLandscapeSpec& spec,
                                            const SweepOptions& options = {});

}  // namespace rydgate
