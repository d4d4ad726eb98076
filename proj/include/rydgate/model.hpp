#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Pulses, system parameters and Hamiltonians of the two-atom Rydberg phase gate.
//
// Units: time in units of the pulse width t_p, frequencies in 1/t_p. The pulse
// is centred at t = 0 and truncated to the window [-W, W], W = window_halfwidth * t_p.
//
// Drive: Omega_x = Omega(t) sin(omega_e t), Omega_y = Omega(t) cos(omega_e t),
// entering each atom as (1/2)(Omega_x sigma_x + Omega_y sigma_y) on {|1>, |r>}.
// The one-photon detuning Delta is the energy of each Rydberg excitation.

namespace rydgate {

using cplx = std::complex<double>;

// Normalised envelope profile f(x), x = t / t_p, with f(0) = 1.
struct EnvelopeShape {
    std::string name;
    std::function<double(double)> profile;
    std::function<double(double)> slope;  // df/dx
};

// exp(-x^2). Also what a null PulseParams::shape means.
std::shared_ptr<const EnvelopeShape> gaussian_shape();

struct PulseParams {
    double omega0 = 0.0;            // peak Rabi frequency
    double t_p = 1.0;               // pulse width
    double omega_e = 0.0;           // modulation frequency (signed)
    double window_halfwidth = 4.5;  // in units of t_p
    std::shared_ptr<const EnvelopeShape> shape;  // null -> Gaussian
};

struct SystemParams {
    PulseParams pulse;
    double v = 0.0;      // Rydberg-Rydberg interaction
    double delta = 0.0;  // one-photon detuning
};

// Basis orderings:
//   SingleRotating  {|1>, |r>}                         (rotating frame)
//   TripleRotating  {|11>, |W>, |rr>}, |W> = (|1r>+|r1>)/sqrt2 (rotating frame)
//   FullRWA         {|0>,|1>,|r>} x {|0>,|1>,|r>}, index 3*a + b (field-interaction frame)
enum class HamiltonianKind { SingleRotating, TripleRotating, FullRWA };

int dimension(HamiltonianKind kind);
std::vector<std::string> basis_labels(HamiltonianKind kind);
std::string to_string(HamiltonianKind kind);

void validate(const PulseParams& p);
void validate(const SystemParams& s);

inline double window(const PulseParams& p) { return p.window_halfwidth * p.t_p; }

double envelope(double t, const PulseParams& p);
double envelope_slope(double t, const PulseParams& p);

struct Quadratures {
    double x;
    double y;
};
Quadratures quadratures(double t, const PulseParams& p);

// S(t) = integral of Omega from -W to t.
double pulse_area(const PulseParams& p, double t);
inline double pulse_area(const PulseParams& p) { return pulse_area(p, window(p)); }

// Fixed-size builders; N = 2, 3 or 9 selects the kind.
template <int N>
Eigen::Matrix<cplx, N, N> hamiltonian_fixed(double t, const SystemParams& s);

Eigen::MatrixXcd hamiltonian(double t, const SystemParams& s, HamiltonianKind kind);

// Diagonal of R(t) with psi_field = R(t) psi_rotating, for the rotating kinds.
std::vector<cplx> frame_transform(double t, double omega_e, HamiltonianKind kind);

// max_t |omega_e dOmega/dt| / (2 Omega_e^3), Omega_e = sqrt(omega_e^2 + Omega^2),
// on `samples` uniform points of the window. +inf when omega_e = 0 and Omega0 > 0.
double adiabaticity_margin_single(const SystemParams& s, int samples = 10000);

struct NonadiabaticBoundaries {
    double near_zero;       // Omega0 where the omega_e = 0 region begins
    double near_resonance;  // Omega0 where the 2 omega_e = V region begins
};
NonadiabaticBoundaries nonadiabatic_boundaries(double omega_e, double v, double t_p = 1.0);

}  // namespace rydgate
