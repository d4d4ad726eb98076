#include "rydgate/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "rydgate/errors.hpp"
#include "rydgate/gate.hpp"
#include "rydgate/io.hpp"
#include "rydgate/parallel.hpp"

namespace rydgate {

namespace {

using std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_axis(const SweepAxis& a) {
    if (a.values.empty()) {
        throw ValidationError(a.name, "axis has no points");
    }
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        if (!std::isfinite(a.values[i])) {
            throw ValidationError(a.name, "axis values must be finite");
        }
        if (i > 0 && a.values[i] < a.values[i - 1]) {
            throw ValidationError(a.name, "axis values must be sorted ascending");
        }
    }
}

PulseParams pulse_for(const SweepOptions& o, double omega0, double omega_e) {
    PulseParams p;
    p.omega0 = omega0;
    p.omega_e = omega_e;
    p.t_p = o.t_p;
    p.window_halfwidth = o.window_halfwidth;
    return p;
}

std::string describe(double x) { return fmt17(x); }

}  // namespace

SweepAxis linspace_axis(std::string name, double lo, double hi, int n) {
    if (n < 1) {
        throw ValidationError(name, "axis needs at least one point");
    }
    if (!(lo <= hi)) {
        throw ValidationError(name, "axis range must satisfy lo <= hi");
    }
    SweepAxis a{std::move(name), {}};
    a.values.resize(n);
    for (int i = 0; i < n; ++i) {
        a.values[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    }
    if (n > 1) {
        a.values.back() = hi;
    }
    return a;
}

SweepGrid::SweepGrid(SweepAxis x_axis, SweepAxis y_axis, std::string metric_name)
    : x(std::move(x_axis)), y(std::move(y_axis)), metric(std::move(metric_name)) {
    values.assign(nx() * ny(), kNaN);
    reasons.assign(nx() * ny(), std::string{});
}

void SweepGrid::fail(std::size_t iy, std::size_t ix, const std::string& reason) {
    at(iy, ix) = kNaN;
    reasons[iy * nx() + ix] = reason.empty() ? "unknown failure" : reason;
}

std::size_t SweepGrid::failed_cells() const {
    return static_cast<std::size_t>(std::count_if(reasons.begin(), reasons.end(),
                                                  [](const std::string& r) { return !r.empty(); }));
}

void write_grid_csv(std::ostream& os, const SweepGrid& g) {
    os << g.metric << ',' << g.x.name << ',' << g.y.name << '\n';
    for (std::size_t iy = 0; iy < g.ny(); ++iy) {
        for (std::size_t ix = 0; ix < g.nx(); ++ix) {
            os << fmt17(g.y.values[iy]) << ',' << fmt17(g.x.values[ix]) << ',' << fmt17(g.at(iy, ix)) << '\n';
        }
    }
}

nlohmann::json grid_to_json(const SweepGrid& g) {
    using nlohmann::json;
    json rows = json::array();
    json failures = json::array();
    for (std::size_t iy = 0; iy < g.ny(); ++iy) {
        json row = json::array();
        for (std::size_t ix = 0; ix < g.nx(); ++ix) {
            const double v = g.at(iy, ix);
            row.push_back(std::isfinite(v) ? json(v) : json(nullptr));
            const std::string& reason = g.reasons[iy * g.nx() + ix];
            if (!reason.empty()) {
                failures.push_back({{"iy", iy}, {"ix", ix}, {"reason", reason}});
            }
        }
        rows.push_back(std::move(row));
    }
    return {{"metric", g.metric},
            {"x", {{"name", g.x.name}, {"values", g.x.values}}},
            {"y", {{"name", g.y.name}, {"values", g.y.values}}},
            {"values", std::move(rows)},
            {"failures", std::move(failures)}};
}

RootResult continuation_root(const std::function<double(double)>& f, Bracket bracket, const RootOptions& o) {
    if (!(std::isfinite(bracket.lo) && std::isfinite(bracket.hi) && bracket.lo < bracket.hi)) {
        throw ValidationError("bracket", "need finite lo < hi");
    }
    if (o.ladder_intervals < 1) {
        throw ValidationError("ladder_intervals", "must be >= 1");
    }
    RootResult out;
    const auto eval = [&](double x) {
        ++out.evaluations;
        const double y = f(x);
        if (!std::isfinite(y)) {
            throw DomainError("continuation_root: non-finite residual at " + describe(x));
        }
        return y;
    };

    double x0 = bracket.lo;
    double f0 = eval(x0);
    const double f_lo = f0;
    if (std::abs(f0) <= o.residual_tol) {
        out.root = x0;
        out.residual = f0;
        return out;
    }
    const int n = o.ladder_intervals;
    for (int i = 1; i <= n; ++i) {
        const double x1 = i == n ? bracket.hi : bracket.lo + (bracket.hi - bracket.lo) * i / n;
        const double f1 = eval(x1);
        if (std::abs(f1) <= o.residual_tol) {
            out.root = x1;
            out.residual = f1;
            return out;
        }
        if ((f0 < 0.0) != (f1 < 0.0)) {
            double a = x0, fa = f0, b = x1;
            double best = x1, fbest = f1;
            if (std::abs(f0) < std::abs(f1)) {
                best = x0;
                fbest = f0;
            }
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                if (m <= a || m >= b) {
                    break;
                }
                const double fm = eval(m);
                if (std::abs(fm) < std::abs(fbest)) {
                    best = m;
                    fbest = fm;
                }
                if (std::abs(fm) <= 0.1 * o.residual_tol) {
                    break;
                }
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            if (std::abs(fbest) <= o.residual_tol) {
                out.root = best;
                out.residual = fbest;
                return out;
            }
            // sign change without a root: a jump in the unwrapped phase
        }
        x0 = x1;
        f0 = f1;
        if (i == n) {
            throw BracketError("no root in [" + describe(bracket.lo) + ", " + describe(bracket.hi) +
                                   "]: residual " + describe(f_lo) + " at lo, " + describe(f1) + " at hi",
                               f_lo, f1);
        }
    }
    throw BracketError("no root found", f_lo, f0);
}

RootResult solve_omega0_for_alpha(const SystemParams& base, double alpha_target, Bracket bracket,
                                  const RootOptions& options) {
    if (!std::isfinite(alpha_target)) {
        throw ValidationError("alpha_target", "must be finite");
    }
    if (bracket.lo < 0.0) {
        throw ValidationError("bracket", "Omega0 must be >= 0");
    }
    SystemParams s = base;
    s.pulse.omega0 = bracket.lo;
    validate(s);
    PhaseOptions po;
    po.tol = options.tol;
    const auto f = [&](double omega0) {
        SystemParams c = s;
        c.pulse.omega0 = omega0;
        return phase_of(c, HamiltonianKind::SingleRotating, 0, po).phase - alpha_target;
    };
    try {
        return continuation_root(f, bracket, options);
    } catch (const BracketError& e) {
        throw BracketError(std::string("solve_omega0_for_alpha: ") + e.what() + " (alpha = " +
                               describe(e.f_lo() + alpha_target) + " .. " + describe(e.f_hi() + alpha_target) + ")",
                           e.f_lo() + alpha_target, e.f_hi() + alpha_target);
    }
}

RootResult solve_omega0_for_alpha(double omega_e, double alpha_target, Bracket bracket, const RootOptions& options) {
    SystemParams s;
    s.pulse.omega_e = omega_e;
    return solve_omega0_for_alpha(s, alpha_target, bracket, options);
}

RootResult solve_v_for_beta(const SystemParams& base, double beta_target, Bracket bracket,
                            const RootOptions& options) {
    if (!std::isfinite(beta_target)) {
        throw ValidationError("beta_target", "must be finite");
    }
    if (bracket.lo < 0.0) {
        throw ValidationError("bracket", "V must be >= 0");
    }
    SystemParams s = base;
    s.v = bracket.lo;
    validate(s);
    PhaseOptions po;
    po.tol = options.tol;
    const auto f = [&](double v) {
        SystemParams c = s;
        c.v = v;
        return phase_of(c, HamiltonianKind::TripleRotating, 0, po).phase - beta_target;
    };

    std::vector<Bracket> segments;
    const double critical = 2.0 * s.pulse.omega_e;
    const double gap = 1e-6 * std::max(1.0, std::abs(critical));
    if (bracket.lo < critical && critical < bracket.hi) {
        if (critical - gap > bracket.lo) {
            segments.push_back({bracket.lo, critical - gap});
        }
        if (critical + gap < bracket.hi) {
            segments.push_back({critical + gap, bracket.hi});
        }
    } else {
        segments.push_back(bracket);
    }

    std::string diagnostics;
    double f_lo = kNaN, f_hi = kNaN;
    for (const Bracket& seg : segments) {
        try {
            return continuation_root(f, seg, options);
        } catch (const BracketError& e) {
            if (std::isnan(f_lo)) {
                f_lo = e.f_lo() + beta_target;
            }
            f_hi = e.f_hi() + beta_target;
            diagnostics += (diagnostics.empty() ? "" : "; ") + std::string(e.what());
        }
    }
    throw BracketError("solve_v_for_beta: " + diagnostics + " (beta = " + describe(f_lo) + " .. " +
                           describe(f_hi) + ")",
                       f_lo, f_hi);
}

RootResult solve_v_for_beta(double omega_e, double omega0, double beta_target, Bracket bracket,
                            const RootOptions& options) {
    SystemParams s;
    s.pulse.omega_e = omega_e;
    s.pulse.omega0 = omega0;
    return solve_v_for_beta(s, beta_target, bracket, options);
}

AnalyticOptimum analytic_optimum(double omega_e, double t_p) {
    return {std::pow(128.0 * pi, 0.25) * std::sqrt(omega_e / t_p), 2.0 * omega_e + 16.0 * std::sqrt(pi) / t_p};
}

PhaseMaps sweep_phase_maps(const SweepAxis& omega_e, const SweepAxis& omega0, double v, const SweepOptions& o) {
    check_axis(omega_e);
    check_axis(omega0);
    PhaseMaps m{SweepGrid(omega_e, omega0, "alpha"), SweepGrid(omega_e, omega0, "beta"),
                SweepGrid(omega_e, omega0, "return_population_single"),
                SweepGrid(omega_e, omega0, "return_population_triple")};
    const std::size_t nx = omega_e.values.size();
    parallel_for(m.alpha.values.size(), resolve_threads(o.threads), [&](std::size_t i) {
        const std::size_t iy = i / nx, ix = i % nx;
        try {
            SystemParams s{pulse_for(o, omega0.values[iy], omega_e.values[ix]), v, 0.0};
            validate(s);
            const GateReport r = gate_from_dynamics(s, o.tol);
            m.alpha.at(iy, ix) = r.alpha;
            m.beta.at(iy, ix) = r.beta;
            m.return_population_single.at(iy, ix) = r.return_population_single;
            m.return_population_triple.at(iy, ix) = r.return_population_triple;
        } catch (const std::exception& e) {
            for (SweepGrid* g : {&m.alpha, &m.beta, &m.return_population_single, &m.return_population_triple}) {
                g->fail(iy, ix, e.what());
            }
        }
    });
    return m;
}

GateMaps sweep_gate_metrics(const SweepAxis& omega_e, const SweepAxis& ratio, double v, const SweepOptions& o) {
    check_axis(omega_e);
    check_axis(ratio);
    GateMaps m{SweepGrid(omega_e, ratio, "fidelity_cz"), SweepGrid(omega_e, ratio, "entangling_power"),
               SweepGrid(omega_e, ratio, "alpha"), SweepGrid(omega_e, ratio, "beta")};
    const std::size_t nx = omega_e.values.size();
    parallel_for(m.fidelity.values.size(), resolve_threads(o.threads), [&](std::size_t i) {
        const std::size_t iy = i / nx, ix = i % nx;
        try {
            SystemParams s{pulse_for(o, ratio.values[iy] * v, omega_e.values[ix]), v, 0.0};
            validate(s);
            const GateReport r = gate_from_dynamics(s, o.tol);
            m.fidelity.at(iy, ix) = r.fidelity_cz;
            m.entangling_power.at(iy, ix) = r.entangling_power;
            m.alpha.at(iy, ix) = r.alpha;
            m.beta.at(iy, ix) = r.beta;
        } catch (const std::exception& e) {
            for (SweepGrid* g : {&m.fidelity, &m.entangling_power, &m.alpha, &m.beta}) {
                g->fail(iy, ix, e.what());
            }
        }
    });
    return m;
}

FidelityLandscape sweep_fidelity_vs_v_omega(const FidelityLandscapeSpec& spec, const SweepOptions& o) {
    check_axis(spec.omega_e);
    check_axis(spec.v);
    const std::size_t nx = spec.omega_e.values.size();
    const int threads = resolve_threads(o.threads);
    RootOptions ro;
    ro.tol = o.tol;

    FidelityLandscape out{SweepGrid(spec.omega_e, spec.v, "fidelity_cz"),
                          SweepGrid(spec.omega_e, spec.v, "return_population_11"),
                          std::vector<double>(nx, kNaN), std::vector<std::string>(nx),
                          std::vector<double>(nx, kNaN), std::vector<std::string>(nx)};

    parallel_for(nx, threads, [&](std::size_t ix) {
        const double we = spec.omega_e.values[ix];
        try {
            SystemParams s{pulse_for(o, 0.0, we), 0.0, 0.0};
            out.omega0_opt[ix] = solve_omega0_for_alpha(s, spec.alpha_target, spec.omega0_bracket, ro).root;
        } catch (const std::exception& e) {
            out.omega0_reason[ix] = std::string("omega0 solve failed: ") + e.what();
            return;
        }
        if (!spec.locus) {
            return;
        }
        try {
            SystemParams s{pulse_for(o, out.omega0_opt[ix], we), 0.0, 0.0};
            Bracket vb = spec.v_bracket;
            if (spec.locus_above_resonance) {
                vb.lo = std::max(vb.lo, 2.0 * we);
            }
            out.locus_v[ix] = solve_v_for_beta(s, spec.beta_target, vb, ro).root;
        } catch (const std::exception& e) {
            out.locus_reason[ix] = std::string("V solve failed: ") + e.what();
        }
    });

    parallel_for(out.fidelity.values.size(), threads, [&](std::size_t i) {
        const std::size_t iy = i / nx, ix = i % nx;
        if (!out.omega0_reason[ix].empty()) {
            out.fidelity.fail(iy, ix, out.omega0_reason[ix]);
            out.population.fail(iy, ix, out.omega0_reason[ix]);
            return;
        }
        try {
            SystemParams s{pulse_for(o, out.omega0_opt[ix], spec.omega_e.values[ix]), spec.v.values[iy], 0.0};
            validate(s);
            const GateReport r = gate_from_dynamics(s, o.tol);
            out.fidelity.at(iy, ix) = r.fidelity_cz;
            out.population.at(iy, ix) = r.return_population_triple;
        } catch (const std::exception& e) {
            out.fidelity.fail(iy, ix, e.what());
            out.population.fail(iy, ix, e.what());
        }
    });
    return out;
}

}  // namespace rydgate
