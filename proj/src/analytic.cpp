#include "rydgate/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rydgate/errors.hpp"
#include "rydgate/quadrature.hpp"

namespace rydgate {

namespace {

using std::numbers::pi;

constexpr double kQuadTol = 1e-10;

void require_resonant(const SystemParams& s) {
    validate(s);
    if (s.delta != 0.0) {
        throw ValidationError("delta", "closed-form phases assume delta = 0");
    }
}

void require_modulated(const SystemParams& s, const char* what) {
    if (s.pulse.omega_e == 0.0) {
        throw CriticalPointError(std::string(what) + ": omega_e = 0 is a critical point");
    }
}

double sign(double x) { return x > 0.0 ? 1.0 : -1.0; }

}  // namespace

DressedPair dressed_energies_single(double t, const SystemParams& s) {
    require_resonant(s);
    const double we = s.pulse.omega_e;
    const double gap = std::hypot(we, envelope(t, s.pulse));
    return {0.5 * (-we + gap), 0.5 * (-we - gap)};
}

double alpha_adiabatic(const SystemParams& s) {
    require_resonant(s);
    require_modulated(s, "alpha_adiabatic");
    const double we = s.pulse.omega_e;
    const double w = window(s.pulse);
    // -E along the connected branch, written without cancellation:
    // (omega_e - sgn(omega_e) Omega_e)/2 = -sgn(omega_e) Omega^2 / (2 (|omega_e| + Omega_e))
    return integrate([&](double t) {
        const double omega = envelope(t, s.pulse);
        const double gap = std::hypot(we, omega);
        return -sign(we) * omega * omega / (2.0 * (std::abs(we) + gap));
    }, -w, w, kQuadTol);
}

double alpha_ae_limit(const SystemParams& s) {
    require_modulated(s, "alpha_ae_limit");
    const PulseParams& p = s.pulse;
    return -0.25 * std::sqrt(pi / 2.0) * p.omega0 * p.omega0 * p.t_p / p.omega_e;
}

DressedSpectrum cubic_energies(double omega, double omega_e, double v) {
    const double om2 = omega * omega;
    const double we = omega_e;
    DressedSpectrum out;
    out.p = om2 + we * we - v * we + v * v / 3.0;
    out.q = om2 * v / 6.0 - v * we * we / 3.0 + v * v * we / 3.0 - 2.0 * v * v * v / 27.0;
    if (!(out.p > 0.0)) {
        throw DomainError("cubic_energies: p <= 0 (fully degenerate spectrum)");
    }
    double x = -(3.0 * out.q / out.p) * std::sqrt(3.0 / (4.0 * out.p));
    if (std::abs(x) > 1.0 + 1e-12) {
        throw DomainError("cubic_energies: arccos argument outside [-1, 1]");
    }
    x = std::clamp(x, -1.0, 1.0);
    const double shift = v / 3.0 - we;
    const double radius = std::sqrt(4.0 * out.p / 3.0);
    const double theta = std::acos(x);
    for (int k = 0; k < 3; ++k) {
        out.energies[k] = shift + radius * std::cos((theta + 2.0 * k * pi) / 3.0);
    }
    return out;
}

DressedSpectrum dressed_energies_three(double t, const SystemParams& s) {
    require_resonant(s);
    DressedSpectrum out = cubic_energies(envelope(t, s.pulse), s.pulse.omega_e, s.v);
    const double we = s.pulse.omega_e;
    out.branch = (we == 0.0 || 2.0 * we == s.v) ? -1 : branch_index(we, s.v);
    return out;
}

int branch_index(double omega_e, double v) {
    if (omega_e == 0.0) {
        throw CriticalPointError("branch_index: omega_e = 0 is a critical point");
    }
    if (2.0 * omega_e == v) {
        throw CriticalPointError("branch_index: omega_e = V/2 is a critical point");
    }
    if (omega_e < 0.0) {
        return 1;
    }
    return 2.0 * omega_e < v ? 2 : 0;
}

double beta_adiabatic_on_branch(const SystemParams& s, int k) {
    require_resonant(s);
    if (k < 0 || k > 2) {
        throw ValidationError("k", "branch must be 0, 1 or 2");
    }
    if (s.pulse.omega0 == 0.0) {
        return 0.0;
    }
    const double w = window(s.pulse);
    return -integrate([&](double t) {
        return cubic_energies(envelope(t, s.pulse), s.pulse.omega_e, s.v).energies[k];
    }, -w, w, kQuadTol);
}

double beta_adiabatic(const SystemParams& s) {
    require_resonant(s);
    return beta_adiabatic_on_branch(s, branch_index(s.pulse.omega_e, s.v));
}

double beta_ae_limit(const SystemParams& s) {
    require_resonant(s);
    require_modulated(s, "beta_ae_limit");
    const double we = s.pulse.omega_e;
    const double detuned = s.v - 2.0 * we;
    if (detuned == 0.0) {
        throw CriticalPointError("beta_ae_limit: V = 2 omega_e, use resonant_case");
    }
    const double w = window(s.pulse);
    return -0.5 * integrate([&](double t) {
        const double om2 = std::pow(envelope(t, s.pulse), 2);
        return om2 / (we + om2 / (2.0 * detuned));
    }, -w, w, kQuadTol);
}

double beta_ae_expanded(const SystemParams& s) {
    require_modulated(s, "beta_ae_expanded");
    const double we = s.pulse.omega_e;
    const double detuned = s.v - 2.0 * we;
    if (detuned == 0.0) {
        throw CriticalPointError("beta_ae_expanded: V = 2 omega_e, use resonant_case");
    }
    const double o2 = s.pulse.omega0 * s.pulse.omega0;
    const double tp = s.pulse.t_p;
    return -0.5 * std::sqrt(pi / 2.0) * o2 * tp / we + std::sqrt(pi) / 8.0 * o2 * o2 * tp / (we * we * detuned);
}

ResonantAmplitudes resonant_case(const SystemParams& s) {
    require_resonant(s);
    const double we = s.pulse.omega_e;
    if (std::abs(s.v - 2.0 * we) > 1e-12 * std::max(1.0, s.v)) {
        throw ValidationError("v", "resonant_case requires V = 2 omega_e");
    }
    const double w = window(s.pulse);
    // (omega_e - sqrt(omega_e^2 + 4 Omega^2)) / 4 without cancellation
    const double beta = integrate([&](double t) {
        const double om2 = std::pow(envelope(t, s.pulse), 2);
        return -om2 / (std::abs(we) + std::sqrt(we * we + 4.0 * om2));
    }, -w, w, kQuadTol);
    const std::complex<double> phase = std::polar(1.0, beta);
    return {std::cos(beta) * phase, std::complex<double>(0.0, std::sin(beta)) * phase, beta};
}

double rabi_case_alpha(const SystemParams& s) {
    require_resonant(s);
    if (s.pulse.omega_e != 0.0) {
        throw ValidationError("omega_e", "rabi_case_alpha requires omega_e = 0");
    }
    const double c = std::cos(0.5 * pulse_area(s.pulse));
    if (std::abs(c) < 1e-10) {
        throw DomainError("rabi_case_alpha: cos(S/2) = 0, population fully transferred to |r>");
    }
    return c > 0.0 ? 0.0 : pi;
}

double magnus_effective_phase(const SystemParams& s) {
    require_modulated(s, "magnus_effective_phase");
    const double we = s.pulse.omega_e;
    const double w = window(s.pulse);
    return -integrate([&](double t) { return std::pow(envelope(t, s.pulse), 2) / (4.0 * we); }, -w, w, kQuadTol);
}

TripleMargin adiabaticity_margin_triple(const SystemParams& s, int k, int l, int samples) {
    require_resonant(s);
    if (k < 0 || k > 2 || l < 0 || l > 2 || k == l) {
        throw ValidationError("k,l", "need two distinct branches in {0, 1, 2}");
    }
    const double we = s.pulse.omega_e;
    const double detuned = s.v - 2.0 * we;
    const double w = window(s.pulse);
    TripleMargin out;
    for (int i = 0; i < samples; ++i) {
        const double t = -w + 2.0 * w * i / (samples - 1);
        const double omega = envelope(t, s.pulse);
        const double slope = envelope_slope(t, s.pulse);
        if (omega == 0.0) {
            ++out.skipped;
            continue;
        }
        const auto e = cubic_energies(omega, we, s.v).energies;
        const double ek = e[k];
        const double el = e[l];
        if (ek == 0.0 || el == 0.0 || detuned - ek == 0.0 || detuned - el == 0.0) {
            ++out.skipped;
            continue;
        }
        if (ek == el) {
            out.margin = std::numeric_limits<double>::infinity();
            return out;
        }
        const auto norm = [&](double en) {
            return std::sqrt(1.0 / (en * en) + 2.0 / (omega * omega) + 1.0 / ((detuned - en) * (detuned - en)));
        };
        const double value = std::abs(2.0 * slope * (ek + el + 2.0 * we)) /
                             (omega * omega * omega * norm(ek) * norm(el) * (el - ek) * (el - ek));
        out.margin = std::max(out.margin, value);
    }
    return out;
}

double adiabaticity_margin_branch(const SystemParams& s, int samples) {
    require_resonant(s);
    if (s.pulse.omega0 == 0.0) {
        return 0.0;
    }
    const double we = s.pulse.omega_e;
    if (we == 0.0 || 2.0 * we == s.v) {
        return std::numeric_limits<double>::infinity();
    }
    const int k = branch_index(we, s.v);
    double margin = 0.0;
    for (int l = 0; l < 3; ++l) {
        if (l != k) {
            margin = std::max(margin, adiabaticity_margin_triple(s, k, l, samples).margin);
        }
    }
    return margin;
}

}  // namespace rydgate
