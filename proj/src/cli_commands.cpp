#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "rydgate/analytic.hpp"
#include "rydgate/cli.hpp"
#include "rydgate/design.hpp"
#include "rydgate/errors.hpp"
#include "rydgate/gate.hpp"
#include "rydgate/io.hpp"
#include "rydgate/noise.hpp"
#include "rydgate/propagator.hpp"

namespace rydgate::cli {

namespace {

using std::numbers::pi;
namespace fs = std::filesystem;

// Numeric/string table written as CSV or as {"columns", "rows"} JSON.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

std::string csv_cell(const json& v) {
    if (v.is_null()) {
        return "nan";
    }
    if (v.is_number()) {
        return fmt17(v.get<double>());
    }
    if (v.is_boolean()) {
        return v.get<bool>() ? "true" : "false";
    }
    std::string s = v.get<std::string>();
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

class Writer {
  public:
    explicit Writer(const RunContext& ctx) : ctx_(ctx) {
        std::error_code ec;
        fs::create_directories(ctx.out_dir, ec);
        if (ec) {
            throw std::runtime_error("cannot create output directory " + ctx.out_dir.string() + ": " + ec.message());
        }
    }

    const char* ext() const { return ctx_.format == Format::Csv ? ".csv" : ".json"; }

    void text(const std::string& name, const std::string& content, const std::string& description) {
        const fs::path path = ctx_.out_dir / name;
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os) {
            throw std::runtime_error("cannot open " + path.string() + " for writing");
        }
        os << content;
        os.close();
        if (!os) {
            throw std::runtime_error("write failed for " + path.string());
        }
        outputs_.push_back({{"file", name}, {"description", description}});
    }

    void json_file(const std::string& name, const json& j, const std::string& description) {
        text(name, j.dump(2) + "\n", description);
    }

    void table(const std::string& stem, const Table& t, const std::string& description) {
        std::ostringstream os;
        if (ctx_.format == Format::Csv) {
            for (std::size_t i = 0; i < t.columns.size(); ++i) {
                os << (i ? "," : "") << t.columns[i];
            }
            os << '\n';
            for (const auto& row : t.rows) {
                for (std::size_t i = 0; i < row.size(); ++i) {
                    os << (i ? "," : "") << csv_cell(row[i]);
                }
                os << '\n';
            }
        } else {
            json rows = json::array();
            for (const auto& row : t.rows) {
                rows.push_back(row);
            }
            os << json{{"columns", t.columns}, {"rows", std::move(rows)}}.dump(2) << '\n';
        }
        text(stem + ext(), os.str(), description);
    }

    void grid(const std::string& stem, const SweepGrid& g, const std::string& description) {
        if (ctx_.format == Format::Csv) {
            std::ostringstream os;
            write_grid_csv(os, g);
            text(stem + ".csv", os.str(), description);
            if (g.failed_cells() > 0) {
                Table f{{"iy", "ix", g.y.name, g.x.name, "reason"}, {}};
                for (std::size_t iy = 0; iy < g.ny(); ++iy) {
                    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
                        const std::string& r = g.reasons[iy * g.nx() + ix];
                        if (!r.empty()) {
                            f.rows.push_back({iy, ix, g.y.values[iy], g.x.values[ix], r});
                        }
                    }
                }
                table(stem + "_failures", f, "failed cells of " + stem);
            }
        } else {
            json_file(stem + ".json", grid_to_json(g), description);
        }
    }

    const json& outputs() const { return outputs_; }
    void log(const std::string& line) const {
        if (ctx_.log) {
            *ctx_.log << line << '\n';
        }
    }

  private:
    const RunContext& ctx_;
    json outputs_ = json::array();
};

// Prefixes validation keys with the config block they came from.
template <class F>
auto scoped(const std::string& prefix, F&& f) {
    try {
        return f();
    } catch (const ValidationError& e) {
        const std::string what = e.what();
        const std::string msg = what.substr(std::min(what.size(), e.key().size() + 2));
        throw ValidationError(prefix + e.key(), msg);
    }
}

SweepAxis read_axis(const json& j, const std::string& name, const std::string& path) {
    return scoped(path + ".", [&] {
        return linspace_axis(name, j.at("min").get<double>(), j.at("max").get<double>(), j.at("points").get<int>());
    });
}

Bracket read_bracket(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError("config key '" + path + "': expected [lo, hi]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

std::uint64_t read_seed(const json& j, const std::string& key) {
    if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
        throw ValidationError(key, "must be a non-negative integer");
    }
    return j.get<std::uint64_t>();
}

double read_tol(const json& c) {
    const double tol = c.at("tol").get<double>();
    if (!(tol >= 1e-13 && tol <= 1e-6)) {
        throw ValidationError("tol", "must lie in [1e-13, 1e-6]");
    }
    return tol;
}

SystemParams read_system(const json& j) {
    SystemParams s;
    s.pulse.omega0 = j.at("omega0").get<double>();
    s.pulse.omega_e = j.at("omega_e").get<double>();
    s.pulse.t_p = j.at("t_p").get<double>();
    s.pulse.window_halfwidth = j.at("window_halfwidth").get<double>();
    s.v = j.at("v").get<double>();
    s.delta = j.at("delta").get<double>();
    scoped("system.", [&] { validate(s); return 0; });
    return s;
}

Table trace_table(HamiltonianKind kind, const std::vector<TracePoint>& trace) {
    Table t;
    const auto labels = basis_labels(kind);
    t.columns.push_back("t");
    for (const auto& l : labels) {
        t.columns.push_back("re_" + l);
        t.columns.push_back("im_" + l);
    }
    for (const auto& l : labels) {
        t.columns.push_back("pop_" + l);
    }
    t.columns.push_back("unwrapped_phase");
    for (const TracePoint& p : trace) {
        std::vector<json> row{p.t};
        for (const cplx& a : p.amplitudes) {
            row.push_back(a.real());
            row.push_back(a.imag());
        }
        for (const cplx& a : p.amplitudes) {
            row.push_back(std::norm(a));
        }
        row.push_back(p.phase);
        t.rows.push_back(std::move(row));
    }
    return t;
}

json report_json(const GateReport& r) {
    json j = r;
    j["return_population_single"] = r.return_population_single;
    j["return_population_triple"] = r.return_population_triple;
    j["leakage_flag"] = r.leakage_flag;
    j["unwrap_unreliable"] = r.unwrap_unreliable;
    return j;
}

json cmd_dynamics(const json& c, Writer& w) {
    const SystemParams s = read_system(c.at("system"));
    PhaseOptions po;
    po.tol = read_tol(c);
    po.record_trace = true;
    po.samples_per_period = c.at("samples_per_period").get<int>();
    if (po.samples_per_period < 4) {
        throw ValidationError("samples_per_period", "must be >= 4");
    }
    const PhaseResult single = phase_of(s, HamiltonianKind::SingleRotating, 0, po);
    const PhaseResult triple = phase_of(s, HamiltonianKind::TripleRotating, 0, po);
    w.table("trace_01", trace_table(HamiltonianKind::SingleRotating, single.trace),
            "state |01> in the single-atom rotating frame; unwrapped_phase is alpha(t)");
    w.table("trace_11", trace_table(HamiltonianKind::TripleRotating, triple.trace),
            "state |11> in the {|11>,|W>,|rr>} rotating frame; unwrapped_phase is beta(t)");

    GateReport r = assemble(single.phase, triple.phase);
    r.return_population_single = single.return_population;
    r.return_population_triple = triple.return_population;
    r.leakage = std::max(0.0, 1.0 - std::min(single.return_population, triple.return_population));
    r.leakage_flag = r.leakage > kLeakageFlagThreshold;
    r.unwrap_unreliable = single.unwrap_unreliable || triple.unwrap_unreliable;
    w.json_file("summary.json", report_json(r), "final phases and gate metrics");
    w.log("alpha = " + fmt17(r.alpha) + ", beta = " + fmt17(r.beta) + ", F_cz = " + fmt17(r.fidelity_cz));
    return {{"unwrap_unreliable", r.unwrap_unreliable}};
}

json cmd_sweep(const json& c, Writer& w, const RunContext& ctx) {
    SweepOptions o;
    o.tol = read_tol(c);
    o.threads = ctx.threads;
    o.t_p = c.at("t_p").get<double>();
    o.window_halfwidth = c.at("window_halfwidth").get<double>();
    {
        PulseParams p;
        p.t_p = o.t_p;
        p.window_halfwidth = o.window_halfwidth;
        validate(p);
    }
    json status = json::object();
    bool any = false;
    const auto failed = [](std::initializer_list<const SweepGrid*> gs) {
        std::size_t n = 0;
        for (const SweepGrid* g : gs) {
            n = std::max(n, g->failed_cells());
        }
        return n;
    };

    if (const json& b = c.at("phase_maps"); b.at("enabled").get<bool>()) {
        any = true;
        const SweepAxis we = read_axis(b.at("omega_e"), "omega_e", "phase_maps.omega_e");
        const SweepAxis om = read_axis(b.at("omega0"), "omega0", "phase_maps.omega0");
        const double v = b.at("v").get<double>();
        if (!(v >= 0.0)) {
            throw ValidationError("phase_maps.v", "must be >= 0");
        }
        w.log("phase maps: " + std::to_string(we.values.size() * om.values.size()) + " cells");
        const PhaseMaps m = sweep_phase_maps(we, om, v, o);
        w.grid("phase_maps_alpha", m.alpha, "alpha(omega_e, Omega0)");
        w.grid("phase_maps_beta", m.beta, "beta(omega_e, Omega0)");
        w.grid("phase_maps_population_01", m.return_population_single, "|01> return population");
        w.grid("phase_maps_population_11", m.return_population_triple, "|11> return population");
        status["phase_maps_failed_cells"] = failed({&m.alpha});
    }
    if (const json& b = c.at("gate_metrics"); b.at("enabled").get<bool>()) {
        any = true;
        const SweepAxis we = read_axis(b.at("omega_e"), "omega_e", "gate_metrics.omega_e");
        const SweepAxis ratio = read_axis(b.at("ratio"), "omega0_over_v", "gate_metrics.ratio");
        const double v = b.at("v").get<double>();
        if (!(v > 0.0)) {
            throw ValidationError("gate_metrics.v", "must be > 0");
        }
        w.log("gate metrics: " + std::to_string(we.values.size() * ratio.values.size()) + " cells");
        const GateMaps m = sweep_gate_metrics(we, ratio, v, o);
        w.grid("gate_metrics_fidelity_cz", m.fidelity, "controlled-Z fidelity(omega_e, Omega0/V)");
        w.grid("gate_metrics_entangling_power", m.entangling_power, "entangling power(omega_e, Omega0/V)");
        w.grid("gate_metrics_alpha", m.alpha, "alpha(omega_e, Omega0/V)");
        w.grid("gate_metrics_beta", m.beta, "beta(omega_e, Omega0/V)");
        status["gate_metrics_failed_cells"] = failed({&m.fidelity});
    }
    if (const json& b = c.at("fidelity_landscape"); b.at("enabled").get<bool>()) {
        any = true;
        FidelityLandscapeSpec spec;
        spec.omega_e = read_axis(b.at("omega_e"), "omega_e", "fidelity_landscape.omega_e");
        spec.v = read_axis(b.at("v"), "v", "fidelity_landscape.v");
        spec.alpha_target = b.at("alpha_target_pi").get<double>() * pi;
        spec.beta_target = b.at("beta_target_pi").get<double>() * pi;
        spec.omega0_bracket = read_bracket(b.at("omega0_bracket"), "fidelity_landscape.omega0_bracket");
        spec.v_bracket = read_bracket(b.at("v_bracket"), "fidelity_landscape.v_bracket");
        spec.locus = b.at("locus").get<bool>();
        spec.locus_above_resonance = b.at("locus_above_resonance").get<bool>();
        if (spec.v.values.front() < 0.0) {
            throw ValidationError("fidelity_landscape.v", "V must be >= 0");
        }
        w.log("fidelity landscape: " + std::to_string(spec.omega_e.values.size() * spec.v.values.size()) + " cells");
        const FidelityLandscape m = sweep_fidelity_vs_v_omega(spec, o);
        w.grid("fidelity_landscape_fidelity_cz", m.fidelity, "controlled-Z fidelity(omega_e, V) at solved Omega0");
        w.grid("fidelity_landscape_population_11", m.population, "|11> return population(omega_e, V)");
        Table locus{{"omega_e", "omega0_opt", "v_locus", "omega0_reason", "locus_reason"}, {}};
        for (std::size_t i = 0; i < spec.omega_e.values.size(); ++i) {
            locus.rows.push_back({spec.omega_e.values[i], number(m.omega0_opt[i]), number(m.locus_v[i]),
                                  m.omega0_reason[i], m.locus_reason[i]});
        }
        w.table("fidelity_landscape_locus", locus, "solved Omega0 and the beta-target locus V per omega_e");
        status["fidelity_landscape_failed_cells"] = failed({&m.fidelity});
    }
    if (!any) {
        throw ConfigError("sweep: no block enabled (phase_maps, gate_metrics, fidelity_landscape)");
    }
    return status;
}

struct Solved {
    double omega0;
    double v;
    RootResult omega0_root;
    RootResult v_root;
};

Solved solve_design(const json& b, double tol) {
    SystemParams s;
    s.pulse.omega_e = b.at("omega_e").get<double>();
    s.pulse.t_p = b.at("t_p").get<double>();
    s.pulse.window_halfwidth = b.at("window_halfwidth").get<double>();
    validate(s);
    RootOptions ro;
    ro.tol = tol;
    Solved out{};
    out.omega0_root = solve_omega0_for_alpha(s, b.at("alpha_target_pi").get<double>() * pi,
                                             read_bracket(b.at("omega0_bracket"), "omega0_bracket"), ro);
    s.pulse.omega0 = out.omega0_root.root;
    Bracket vb = read_bracket(b.at("v_bracket"), "v_bracket");
    if (b.at("v_above_resonance").get<bool>()) {
        vb.lo = std::max(vb.lo, 2.0 * s.pulse.omega_e);
    }
    out.v_root = solve_v_for_beta(s, b.at("beta_target_pi").get<double>() * pi, vb, ro);
    out.omega0 = out.omega0_root.root;
    out.v = out.v_root.root;
    return out;
}

json cmd_optimize(const json& c, Writer& w) {
    const double tol = read_tol(c);
    const Solved d = solve_design(c, tol);
    SystemParams s;
    s.pulse.omega_e = c.at("omega_e").get<double>();
    s.pulse.t_p = c.at("t_p").get<double>();
    s.pulse.window_halfwidth = c.at("window_halfwidth").get<double>();
    s.pulse.omega0 = d.omega0;
    s.v = d.v;
    const GateReport r = gate_from_dynamics(s, tol);
    json out{{"omega_e", s.pulse.omega_e},
             {"omega0_opt", d.omega0},
             {"v_opt", d.v},
             {"alpha_residual", d.omega0_root.residual},
             {"beta_residual", d.v_root.residual},
             {"fidelity_cz", r.fidelity_cz},
             {"entangling_power", r.entangling_power},
             {"leakage", r.leakage},
             {"alpha", r.alpha},
             {"beta", r.beta}};
    if (s.pulse.omega_e > 0.0) {
        const AnalyticOptimum ae = analytic_optimum(s.pulse.omega_e, s.pulse.t_p);
        out["ae_omega0"] = ae.omega0;
        out["ae_v"] = ae.v;
        out["ae_omega0_relative_deviation"] = (ae.omega0 - d.omega0) / d.omega0;
        out["ae_v_relative_deviation"] = (ae.v - d.v) / d.v;
    }
    w.json_file("optimum.json", out, "solved design point with AE predictions");
    w.log("Omega0_opt = " + fmt17(d.omega0) + ", V_opt = " + fmt17(d.v) + ", F_cz = " + fmt17(r.fidelity_cz));
    return json::object();
}

json cmd_noise(const json& c, Writer& w, const RunContext& ctx) {
    const double tol = read_tol(c);
    const json& db = c.at("design");
    DesignPoint dp;
    dp.omega_e = db.at("omega_e").get<double>();
    dp.t_p = db.at("t_p").get<double>();
    dp.window_halfwidth = db.at("window_halfwidth").get<double>();
    if (db.at("solve").get<bool>()) {
        const Solved d = scoped("design.", [&] { return solve_design(db, tol); });
        dp.omega0 = d.omega0;
        dp.v = d.v;
    } else {
        dp.omega0 = db.at("omega0").get<double>();
        dp.v = db.at("v").get<double>();
    }
    scoped("design.", [&] { validate(dp.system()); return 0; });
    const double design_fidelity = gate_from_dynamics(dp.system(), tol).fidelity_cz;
    w.json_file("design.json",
                {{"omega_e", dp.omega_e}, {"omega0", dp.omega0}, {"v", dp.v}, {"fidelity_cz", design_fidelity}},
                "design point used for the noise analysis");

    EvalOptions eo;
    eo.tol = tol;
    eo.threads = ctx.threads;
    int failures = 0;
    const auto count_failures = [&](const std::vector<CurvePoint>& curve) {
        for (const auto& p : curve) {
            failures += p.reason.empty() ? 0 : 1;
        }
    };

    if (const json& b = c.at("relative_error"); b.at("enabled").get<bool>()) {
        const SweepAxis eps = read_axis(b.at("epsilon"), "epsilon", "relative_error.epsilon");
        const SensitivityCoeffs analytic = dp.omega_e > 0.0 ? sensitivity_coeffs(dp.omega_e * dp.t_p)
                                                             : SensitivityCoeffs{};
        json table = json::object();
        for (const auto& name : b.at("parameters")) {
            const NoiseParameter chi =
                scoped("relative_error.", [&] { return parse_noise_parameter(name.get<std::string>()); });
            const auto curve = fidelity_vs_relative_error(dp, chi, eps.values, eo);
            count_failures(curve);
            Table t{{"epsilon", "fidelity"}, {}};
            for (const auto& p : curve) {
                t.rows.push_back({p.x, number(p.fidelity)});
            }
            w.table("relative_error_" + to_string(chi), t, "fidelity vs relative error in " + to_string(chi));
            json entry{{"analytic", dp.omega_e > 0.0 ? json(analytic[chi]) : json(nullptr)}};
            try {
                const QuadraticFit fit = fit_quadratic_loss(curve);
                entry["fitted"] = fit.coefficient;
                entry["r_squared"] = fit.r_squared;
                entry["points"] = fit.points;
            } catch (const std::exception& e) {
                entry["fitted"] = nullptr;
                entry["fit_error"] = e.what();
            }
            table[to_string(chi)] = entry;
        }
        w.json_file("sensitivity.json", table, "fitted vs analytic quadratic-loss coefficients");
    }
    if (const json& b = c.at("detuning"); b.at("enabled").get<bool>()) {
        const SweepAxis r = read_axis(b.at("delta_over_v"), "delta_over_v", "detuning.delta_over_v");
        const auto curve = fidelity_vs_detuning(dp, r.values, eo);
        count_failures(curve);
        Table t{{"delta_over_v", "fidelity", "fidelity_drop"}, {}};
        for (const auto& p : curve) {
            t.rows.push_back({p.x, number(p.fidelity), number(design_fidelity - p.fidelity)});
        }
        w.table("detuning", t, "fidelity vs one-photon detuning Delta/V");
    }
    if (const json& b = c.at("monte_carlo"); b.at("enabled").get<bool>()) {
        NoiseSpec spec;
        spec.sigma_omega0 = b.at("sigma_omega0").get<double>();
        spec.sigma_v = b.at("sigma_v").get<double>();
        spec.sigma_omega_e = b.at("sigma_omega_e").get<double>();
        spec.samples = b.at("samples").get<int>();
        spec.seed = read_seed(b.at("seed"), "monte_carlo.seed");
        scoped("monte_carlo.", [&] { validate(spec); return 0; });
        w.log("monte carlo: " + std::to_string(spec.samples) + " samples");
        const MonteCarloResult mc = monte_carlo_fidelity(dp, spec, eo, b.at("histogram_bins").get<int>());
        failures += mc.failed;
        if (w.ext() == std::string(".csv")) {
            std::ostringstream os;
            write_histogram_csv(os, mc.histogram);
            w.text("mc_histogram.csv", os.str(), "Monte-Carlo fidelity histogram");
        } else {
            Table t{{"bin_left", "bin_right", "count"}, {}};
            for (std::size_t i = 0; i < mc.histogram.counts.size(); ++i) {
                t.rows.push_back({mc.histogram.edges[i], mc.histogram.edges[i + 1], mc.histogram.counts[i]});
            }
            w.table("mc_histogram", t, "Monte-Carlo fidelity histogram");
        }
        json summary = summary_json(mc);
        summary["sigma_omega0"] = spec.sigma_omega0;
        summary["sigma_v"] = spec.sigma_v;
        summary["sigma_omega_e"] = spec.sigma_omega_e;
        if (dp.omega_e > 0.0) {
            summary["quadratic_model_mean"] = quadratic_model_mean(sensitivity_coeffs(dp.omega_e * dp.t_p), spec);
        }
        w.json_file("mc_summary.json", summary, "Monte-Carlo summary");
        w.log("<F> = " + fmt17(mc.mean) + " +- " + fmt17(mc.standard_error));
    }
    return {{"failed_points", failures}};
}

// --- self-check battery ---

struct CheckLine {
    std::string name;
    bool passed;
    double residual;
    double tolerance;
    std::string detail;
};

CheckLine check_cubic(const json& c, std::mt19937_64& rng) {
    const int n = c.at("cubic_samples").get<int>();
    const bool wrong = c.at("inject_wrong_branch").get<bool>();
    const double tol = c.at("cubic_tolerance").get<double>();
    std::uniform_real_distribution<double> U_om(0.0, 60.0), U_we(-60.0, 60.0), U_v(0.0, 150.0);
    double worst = 0.0, worst_branch = 0.0;
    for (int i = 0; i < n; ++i) {
        const double om = U_om(rng), we = U_we(rng), v = U_v(rng);
        SystemParams s;
        s.pulse.omega0 = om;
        s.pulse.omega_e = we;
        s.v = v;
        const Eigen::Matrix3cd h = hamiltonian_fixed<3>(0.0, s);
        const Eigen::Vector3d eig = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd>(h).eigenvalues();
        auto e = cubic_energies(om, we, v).energies;
        std::array<double, 3> sorted{e[0], e[1], e[2]};
        std::sort(sorted.begin(), sorted.end());
        const double scale = std::max(1.0, eig.cwiseAbs().maxCoeff());
        for (int k = 0; k < 3; ++k) {
            worst = std::max(worst, std::abs(sorted[k] - eig(k)) / scale);
        }
        // the connected branch starts from the |11> energy 0 at Omega = 0
        int k = branch_index(we, v);
        if (wrong) {
            k = (k + 1) % 3;
        }
        const double e0 = cubic_energies(0.0, we, v).energies[k];
        worst_branch = std::max(worst_branch, std::abs(e0) / std::max({1.0, std::abs(we), std::abs(v - 2.0 * we)}));
    }
    const double r = std::max(worst, worst_branch);
    return {"cubic_vs_eigensolver", r <= tol, r, tol,
            "spectrum " + fmt17(worst) + ", branch " + fmt17(worst_branch) + (wrong ? " (wrong branch injected)" : "")};
}

CheckLine check_subspace(const json& c, std::mt19937_64& rng, double tol) {
    const int n = c.at("subspace_samples").get<int>();
    const double bound = c.at("subspace_tolerance").get<double>();
    std::uniform_real_distribution<double> U_om(0.0, 30.0), U_we(-30.0, 30.0), U_v(0.0, 80.0);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        SystemParams s;
        s.pulse.omega0 = U_om(rng);
        s.pulse.omega_e = U_we(rng);
        s.v = U_v(rng);
        worst = std::max(worst, subspace_consistency(s, tol).max());
    }
    return {"subspace_vs_full", worst <= bound, worst, bound, std::to_string(n) + " parameter sets"};
}

std::vector<CheckLine> check_adiabatic(const json& c, std::mt19937_64& rng, double tol) {
    const int n = c.at("adiabatic_samples").get<int>();
    const double margin_max = c.at("adiabatic_margin_max").get<double>();
    const double ta = c.at("alpha_tolerance").get<double>();
    const double tb = c.at("beta_tolerance").get<double>();
    std::uniform_real_distribution<double> U_we(-50.0, 50.0), U_om(0.0, 50.0);
    double worst_a = 0.0, worst_b = 0.0;
    int accepted = 0, attempts = 0;
    PhaseOptions po;
    po.tol = tol;
    while (accepted < n && attempts < 1000 * n) {
        ++attempts;
        SystemParams s;
        s.pulse.omega_e = U_we(rng);
        s.pulse.omega0 = U_om(rng);
        s.v = 50.0;
        if (s.pulse.omega_e == 0.0 || 2.0 * s.pulse.omega_e == s.v) {
            continue;
        }
        if (adiabaticity_margin_single(s) >= margin_max || adiabaticity_margin_branch(s) >= margin_max) {
            continue;
        }
        ++accepted;
        worst_a = std::max(worst_a, std::abs(alpha_adiabatic(s) - phase_of(s, HamiltonianKind::SingleRotating, 0, po).phase));
        worst_b = std::max(worst_b, std::abs(beta_adiabatic(s) - phase_of(s, HamiltonianKind::TripleRotating, 0, po).phase));
    }
    const std::string detail = std::to_string(accepted) + " sets with margins < " + fmt17(margin_max);
    return {{"adiabatic_vs_exact_alpha", accepted == n && worst_a <= ta, worst_a, ta, detail},
            {"adiabatic_vs_exact_beta", accepted == n && worst_b <= tb, worst_b, tb, detail}};
}

CheckLine check_ae(const json& c) {
    const double bound = c.at("ae_tolerance").get<double>();
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    double last = 0.0;
    std::string detail;
    for (const auto& jr : c.at("ae_ratios")) {
        const double r = jr.get<double>();
        SystemParams s;
        s.pulse.omega0 = 4.0;
        s.pulse.omega_e = r * 4.0;
        s.v = 3.0 * s.pulse.omega_e;
        const double a = alpha_adiabatic(s), b = beta_adiabatic(s);
        const double dev = std::max({std::abs(alpha_ae_limit(s) - a) / std::abs(a),
                                     std::abs(beta_ae_limit(s) - b) / std::abs(b),
                                     std::abs(beta_ae_expanded(s) - b) / std::abs(b)});
        monotone = monotone && dev < prev;
        prev = dev;
        last = dev;
        detail += (detail.empty() ? "" : " ") + fmt17(r) + ":" + fmt17(dev);
    }
    return {"ae_limit_convergence", monotone && last <= bound, last, bound, detail};
}

CheckLine check_resonant(const json& c, double tol) {
    const double bound = c.at("resonant_tolerance").get<double>();
    SystemParams s;
    s.pulse.omega0 = 5.0;
    s.pulse.omega_e = 25.0;
    s.v = 50.0;
    const ResonantAmplitudes ra = resonant_case(s);
    StateVector psi = propagate(s, StateVector::basis_state(HamiltonianKind::TripleRotating, 0), tol);
    const double r = std::max(std::abs(std::norm(psi.amplitudes[0]) - std::norm(ra.a11)),
                              std::abs(std::norm(psi.amplitudes[2]) - std::norm(ra.arr)));
    return {"resonant_real_reading", r <= bound, r, bound, "omega_e = 25, V = 50, Omega0 = 5"};
}

json cmd_check(const json& c, Writer& w, int& exit_code) {
    const double tol = read_tol(c);
    std::mt19937_64 rng(read_seed(c.at("seed"), "seed"));
    std::vector<CheckLine> lines;
    lines.push_back(check_cubic(c, rng));
    lines.push_back(check_subspace(c, rng, tol));
    for (auto& l : check_adiabatic(c, rng, tol)) {
        lines.push_back(std::move(l));
    }
    lines.push_back(check_ae(c));
    lines.push_back(check_resonant(c, tol));

    json report = json::array();
    bool all = true;
    for (const auto& l : lines) {
        all = all && l.passed;
        w.log(std::string(l.passed ? "PASS " : "FAIL ") + l.name + " residual=" + fmt17(l.residual) +
              " tol=" + fmt17(l.tolerance) + " (" + l.detail + ")");
        report.push_back({{"name", l.name},
                          {"passed", l.passed},
                          {"residual", l.residual},
                          {"tolerance", l.tolerance},
                          {"detail", l.detail}});
    }
    w.json_file("check_report.json", report, "cross-validation battery");
    exit_code = all ? 0 : 1;
    return {{"all_passed", all}};
}

}  // namespace

CommandResult run_command(const std::string& command, const json& config, const RunContext& ctx) {
    Writer w(ctx);
    CommandResult result;
    json status;
    if (command == "dynamics") {
        status = cmd_dynamics(config, w);
    } else if (command == "sweep") {
        status = cmd_sweep(config, w, ctx);
    } else if (command == "optimize") {
        status = cmd_optimize(config, w);
    } else if (command == "noise") {
        status = cmd_noise(config, w, ctx);
        if (status.at("failed_points").get<int>() > 0) {
            result.exit_code = 1;
        }
    } else if (command == "check") {
        status = cmd_check(config, w, result.exit_code);
    } else {
        throw ConfigError("unknown command '" + command + "'");
    }
    json outputs = w.outputs();
    outputs.push_back({{"file", "manifest.json"}, {"description", "this manifest"}});
    result.manifest = {{"command", command},
                       {"build", build_describe()},
                       {"format", ctx.format == Format::Csv ? "csv" : "json"},
                       {"config", config},
                       {"outputs", outputs},
                       {"status", status},
                       {"exit_code", result.exit_code}};
    std::ofstream os(ctx.out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
    os << result.manifest.dump(2) << '\n';
    if (!os) {
        throw std::runtime_error("cannot write " + (ctx.out_dir / "manifest.json").string());
    }
    return result;
}

}  // namespace rydgate::cli
