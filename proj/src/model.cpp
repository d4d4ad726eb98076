#include "rydgate/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rydgate/errors.hpp"
#include "rydgate/quadrature.hpp"

namespace rydgate {

namespace {

constexpr cplx I{0.0, 1.0};

double gaussian_profile(double x) { return std::exp(-x * x); }
double gaussian_slope(double x) { return -2.0 * x * std::exp(-x * x); }

}  // namespace

std::shared_ptr<const EnvelopeShape> gaussian_shape() {
    static const auto shape = std::make_shared<const EnvelopeShape>(
        EnvelopeShape{"gaussian", gaussian_profile, gaussian_slope});
    return shape;
}

int dimension(HamiltonianKind kind) {
    switch (kind) {
        case HamiltonianKind::SingleRotating: return 2;
        case HamiltonianKind::TripleRotating: return 3;
        case HamiltonianKind::FullRWA: return 9;
    }
    throw ValidationError("kind", "unknown Hamiltonian kind");
}

std::vector<std::string> basis_labels(HamiltonianKind kind) {
    switch (kind) {
        case HamiltonianKind::SingleRotating: return {"1", "r"};
        case HamiltonianKind::TripleRotating: return {"11", "W", "rr"};
        case HamiltonianKind::FullRWA: {
            static const char* level[] = {"0", "1", "r"};
            std::vector<std::string> out;
            for (const char* a : level) {
                for (const char* b : level) {
                    out.push_back(std::string(a) + b);
                }
            }
            return out;
        }
    }
    throw ValidationError("kind", "unknown Hamiltonian kind");
}

std::string to_string(HamiltonianKind kind) {
    switch (kind) {
        case HamiltonianKind::SingleRotating: return "single_rotating";
        case HamiltonianKind::TripleRotating: return "triple_rotating";
        case HamiltonianKind::FullRWA: return "full_rwa";
    }
    throw ValidationError("kind", "unknown Hamiltonian kind");
}

void validate(const PulseParams& p) {
    if (!std::isfinite(p.omega0) || p.omega0 < 0.0) {
        throw ValidationError("omega0", "must be finite and >= 0");
    }
    if (!std::isfinite(p.t_p) || p.t_p <= 0.0) {
        throw ValidationError("t_p", "must be finite and > 0");
    }
    if (!std::isfinite(p.omega_e)) {
        throw ValidationError("omega_e", "must be finite");
    }
    if (!std::isfinite(p.window_halfwidth) || p.window_halfwidth < 3.0) {
        throw ValidationError("window_halfwidth", "must be >= 3");
    }
}

void validate(const SystemParams& s) {
    validate(s.pulse);
    if (!std::isfinite(s.v) || s.v < 0.0) {
        throw ValidationError("v", "must be finite and >= 0");
    }
    if (!std::isfinite(s.delta)) {
        throw ValidationError("delta", "must be finite");
    }
}

double envelope(double t, const PulseParams& p) {
    if (std::abs(t) > window(p)) {
        return 0.0;
    }
    const double x = t / p.t_p;
    return p.omega0 * (p.shape ? p.shape->profile(x) : gaussian_profile(x));
}

double envelope_slope(double t, const PulseParams& p) {
    if (std::abs(t) > window(p)) {
        return 0.0;
    }
    const double x = t / p.t_p;
    return p.omega0 / p.t_p * (p.shape ? p.shape->slope(x) : gaussian_slope(x));
}

Quadratures quadratures(double t, const PulseParams& p) {
    const double omega = envelope(t, p);
    const double phase = p.omega_e * t;
    return {omega * std::sin(phase), omega * std::cos(phase)};
}

double pulse_area(const PulseParams& p, double t) {
    const double w = window(p);
    const double upper = std::min(t, w);
    if (upper <= -w || p.omega0 == 0.0) {
        return 0.0;
    }
    return integrate([&](double u) { return envelope(u, p); }, -w, upper, 1e-13);
}

template <>
Eigen::Matrix<cplx, 2, 2> hamiltonian_fixed<2>(double t, const SystemParams& s) {
    const double half = 0.5 * envelope(t, s.pulse);
    Eigen::Matrix<cplx, 2, 2> h;
    h << 0.0, half, half, s.delta - s.pulse.omega_e;
    return h;
}

template <>
Eigen::Matrix<cplx, 3, 3> hamiltonian_fixed<3>(double t, const SystemParams& s) {
    const double c = envelope(t, s.pulse) / std::sqrt(2.0);
    const double we = s.pulse.omega_e;
    Eigen::Matrix<cplx, 3, 3> h;
    h << 0.0, c, 0.0,
         c, s.delta - we, c,
         0.0, c, s.v + 2.0 * s.delta - 2.0 * we;
    return h;
}

template <>
Eigen::Matrix<cplx, 9, 9> hamiltonian_fixed<9>(double t, const SystemParams& s) {
    // Single-atom block on {|1>, |r>}: <1|h|r> = (Omega_x - i Omega_y)/2 = -(i/2) Omega e^{i omega_e t}.
    const cplx up = -0.5 * I * envelope(t, s.pulse) * std::exp(I * s.pulse.omega_e * t);
    constexpr int one = 1;
    constexpr int ryd = 2;
    Eigen::Matrix<cplx, 9, 9> h = Eigen::Matrix<cplx, 9, 9>::Zero();
    for (int spectator = 0; spectator < 3; ++spectator) {
        // first atom driven, second atom is the spectator
        h(3 * one + spectator, 3 * ryd + spectator) += up;
        h(3 * ryd + spectator, 3 * one + spectator) += std::conj(up);
        // second atom driven
        h(3 * spectator + one, 3 * spectator + ryd) += up;
        h(3 * spectator + ryd, 3 * spectator + one) += std::conj(up);
    }
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const int excitations = (a == ryd) + (b == ryd);
            h(3 * a + b, 3 * a + b) += excitations * s.delta;
        }
    }
    h(3 * ryd + ryd, 3 * ryd + ryd) += s.v;
    return h;
}

Eigen::MatrixXcd hamiltonian(double t, const SystemParams& s, HamiltonianKind kind) {
    switch (kind) {
        case HamiltonianKind::SingleRotating: return hamiltonian_fixed<2>(t, s);
        case HamiltonianKind::TripleRotating: return hamiltonian_fixed<3>(t, s);
        case HamiltonianKind::FullRWA: return hamiltonian_fixed<9>(t, s);
    }
    throw ValidationError("kind", "unknown Hamiltonian kind");
}

std::vector<cplx> frame_transform(double t, double omega_e, HamiltonianKind kind) {
    const cplx rot = std::exp(-I * omega_e * t);
    switch (kind) {
        case HamiltonianKind::SingleRotating: return {1.0, I * rot};
        case HamiltonianKind::TripleRotating: return {1.0, I * rot, -rot * rot};
        case HamiltonianKind::FullRWA: break;
    }
    throw ValidationError("kind", "frame transform defined for rotating kinds only");
}

double adiabaticity_margin_single(const SystemParams& s, int samples) {
    const PulseParams& p = s.pulse;
    if (p.omega0 == 0.0) {
        return 0.0;
    }
    if (p.omega_e == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double w = window(p);
    const double we = p.omega_e;
    double margin = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = -w + 2.0 * w * i / (samples - 1);
        const double omega = envelope(t, p);
        const double gap = std::sqrt(we * we + omega * omega);
        margin = std::max(margin, std::abs(we * envelope_slope(t, p)) / (2.0 * gap * gap * gap));
    }
    return margin;
}

NonadiabaticBoundaries nonadiabatic_boundaries(double omega_e, double v, double t_p) {
    // Omega0 t_p = 2 (omega_e t_p)^2 and Omega0 t_p = ((V - 2 omega_e) t_p)^2
    const double detuned = v - 2.0 * omega_e;
    return {2.0 * omega_e * omega_e * t_p, detuned * detuned * t_p};
}

}  // namespace rydgate
