#include "rydgate/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include "rydgate/errors.hpp"
#include "rydgate/gate.hpp"
#include "rydgate/io.hpp"
#include "rydgate/parallel.hpp"

namespace rydgate {

namespace {

using std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double fidelity_at(const SystemParams& s, double tol) { return gate_from_dynamics(s, tol).fidelity_cz; }

std::vector<CurvePoint> evaluate_curve(const std::vector<double>& xs, const EvalOptions& o,
                                       const std::function<SystemParams(double)>& make) {
    std::vector<CurvePoint> out(xs.size());
    parallel_for(xs.size(), resolve_threads(o.threads), [&](std::size_t i) {
        out[i].x = xs[i];
        try {
            const SystemParams s = make(xs[i]);
            validate(s);
            out[i].fidelity = fidelity_at(s, o.tol);
        } catch (const std::exception& e) {
            out[i].fidelity = kNaN;
            out[i].reason = e.what();
        }
    });
    return out;
}

}  // namespace

SystemParams DesignPoint::system(double delta) const {
    SystemParams s;
    s.pulse.omega0 = omega0;
    s.pulse.omega_e = omega_e;
    s.pulse.t_p = t_p;
    s.pulse.window_halfwidth = window_halfwidth;
    s.v = v;
    s.delta = delta;
    return s;
}

std::string to_string(NoiseParameter p) {
    switch (p) {
        case NoiseParameter::Omega0: return "omega0";
        case NoiseParameter::V: return "v";
        case NoiseParameter::OmegaE: return "omega_e";
    }
    return "?";
}

NoiseParameter parse_noise_parameter(const std::string& name) {
    if (name == "omega0") return NoiseParameter::Omega0;
    if (name == "v") return NoiseParameter::V;
    if (name == "omega_e") return NoiseParameter::OmegaE;
    throw ValidationError("parameter", "expected omega0, v or omega_e, got '" + name + "'");
}

double SensitivityCoeffs::operator[](NoiseParameter p) const {
    switch (p) {
        case NoiseParameter::Omega0: return beta_omega0;
        case NoiseParameter::V: return beta_v;
        case NoiseParameter::OmegaE: return beta_omega_e;
    }
    return kNaN;
}

SensitivityCoeffs sensitivity_coeffs(double x) {
    if (!(x > 0.0)) {
        throw ValidationError("omega_e_tp", "must be > 0");
    }
    const double pi32 = std::pow(pi, 1.5);
    return {3.0 * pi * pi, (3.0 * pi * x * x + 48.0 * pi32 * x + 192.0 * pi * pi) / 1024.0,
            (3.0 * pi * x * x + 32.0 * pi32 * x + 768.0 * pi * pi) / 1024.0};
}

std::vector<CurvePoint> fidelity_vs_relative_error(const DesignPoint& dp, NoiseParameter chi,
                                                   const std::vector<double>& epsilons, const EvalOptions& o) {
    return evaluate_curve(epsilons, o, [&](double eps) {
        DesignPoint p = dp;
        switch (chi) {
            case NoiseParameter::Omega0: p.omega0 *= 1.0 + eps; break;
            case NoiseParameter::V: p.v *= 1.0 + eps; break;
            case NoiseParameter::OmegaE: p.omega_e *= 1.0 + eps; break;
        }
        return p.system();
    });
}

std::vector<CurvePoint> fidelity_vs_detuning(const DesignPoint& dp, const std::vector<double>& delta_over_v,
                                             const EvalOptions& o) {
    return evaluate_curve(delta_over_v, o, [&](double r) { return dp.system(r * dp.v); });
}

QuadraticFit fit_quadratic_loss(const std::vector<CurvePoint>& curve) {
    double s22 = 0.0, s2l = 0.0, mean = 0.0;
    QuadraticFit fit;
    for (const auto& p : curve) {
        if (std::isfinite(p.fidelity)) {
            const double e2 = p.x * p.x;
            s22 += e2 * e2;
            s2l += e2 * (1.0 - p.fidelity);
            mean += p.fidelity;
            ++fit.points;
        }
    }
    if (fit.points == 0 || s22 == 0.0) {
        throw DomainError("fit_quadratic_loss: need points with eps != 0");
    }
    mean /= fit.points;
    fit.coefficient = s2l / s22;
    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& p : curve) {
        if (std::isfinite(p.fidelity)) {
            const double model = 1.0 - fit.coefficient * p.x * p.x;
            ss_res += (p.fidelity - model) * (p.fidelity - model);
            ss_tot += (p.fidelity - mean) * (p.fidelity - mean);
        }
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
    return fit;
}

void validate(const NoiseSpec& s) {
    for (auto [key, sigma] : {std::pair{"sigma_omega0", s.sigma_omega0}, std::pair{"sigma_v", s.sigma_v},
                              std::pair{"sigma_omega_e", s.sigma_omega_e}}) {
        if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
            throw ValidationError(key, "must be finite and >= 0");
        }
    }
    if (s.samples < 1) {
        throw ValidationError("samples", "must be >= 1");
    }
    if (!(s.truncation > 0.0)) {
        throw ValidationError("truncation", "must be > 0");
    }
}

double quadratic_model_mean(const SensitivityCoeffs& c, const NoiseSpec& s) {
    return 1.0 - c.beta_omega0 * s.sigma_omega0 * s.sigma_omega0 - c.beta_v * s.sigma_v * s.sigma_v -
           c.beta_omega_e * s.sigma_omega_e * s.sigma_omega_e;
}

RelativeErrors draw_relative_errors(const NoiseSpec& spec, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    const auto draw = [&] {
        double z = normal(rng);
        while (std::abs(z) > spec.truncation) {
            z = normal(rng);
        }
        return z;
    };
    // always draw all three so each stream is independent of which sigmas are zero
    const double z0 = draw();
    const double zv = draw();
    const double ze = draw();
    return {spec.sigma_omega0 * z0, spec.sigma_v * zv, spec.sigma_omega_e * ze};
}

Histogram make_histogram(const std::vector<double>& data, int bins) {
    if (bins < 1) {
        throw ValidationError("bins", "must be >= 1");
    }
    Histogram h;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double x : data) {
        if (std::isfinite(x)) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    if (!(lo <= hi)) {
        return h;
    }
    if (lo == hi) {
        bins = 1;
    }
    h.edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i) {
        h.edges[i] = lo + (hi - lo) * i / bins;
    }
    h.edges.back() = hi;
    h.counts.assign(bins, 0);
    for (double x : data) {
        if (std::isfinite(x)) {
            int b = hi > lo ? static_cast<int>((x - lo) / (hi - lo) * bins) : 0;
            ++h.counts[std::clamp(b, 0, bins - 1)];
        }
    }
    return h;
}

MonteCarloResult monte_carlo_fidelity(const DesignPoint& dp, const NoiseSpec& spec, const EvalOptions& o,
                                      int histogram_bins) {
    validate(spec);
    validate(dp.system());
    MonteCarloResult r;
    r.seed = spec.seed;
    r.fidelities.assign(spec.samples, kNaN);
    parallel_for(static_cast<std::size_t>(spec.samples), resolve_threads(o.threads), [&](std::size_t i) {
        const RelativeErrors e = draw_relative_errors(spec, i);
        DesignPoint p = dp;
        p.omega0 *= 1.0 + e.omega0;
        p.v *= 1.0 + e.v;
        p.omega_e *= 1.0 + e.omega_e;
        try {
            r.fidelities[i] = fidelity_at(p.system(), o.tol);
        } catch (const std::exception&) {
            r.fidelities[i] = kNaN;
        }
    });
    // sequential reduction in sample order keeps the sums bit-stable; sums are
    // taken about the first finite sample so identical samples give std = 0 exactly
    double shift = kNaN;
    double sum = 0.0, sum2 = 0.0;
    for (double f : r.fidelities) {
        if (std::isfinite(f)) {
            if (std::isnan(shift)) shift = f;
            sum += f - shift;
            sum2 += (f - shift) * (f - shift);
            ++r.n;
        } else {
            ++r.failed;
        }
    }
    if (r.n == 0) {
        throw DomainError("monte_carlo_fidelity: every sample failed");
    }
    r.mean = shift + sum / r.n;
    const double ss = std::max(0.0, sum2 - sum * sum / r.n);
    r.std = r.n > 1 ? std::sqrt(ss / (r.n - 1)) : 0.0;
    r.standard_error = r.std / std::sqrt(static_cast<double>(r.n));
    r.histogram = make_histogram(r.fidelities, histogram_bins);
    return r;
}

void write_histogram_csv(std::ostream& os, const Histogram& h) {
    os << "bin_left,bin_right,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        os << fmt17(h.edges[i]) << ',' << fmt17(h.edges[i + 1]) << ',' << h.counts[i] << '\n';
    }
}

nlohmann::json summary_json(const MonteCarloResult& r) {
    return {{"mean", r.mean}, {"std", r.std}, {"standard_error", r.standard_error},
            {"n", r.n},       {"failed", r.failed}, {"seed", r.seed}};
}

}  // namespace rydgate
