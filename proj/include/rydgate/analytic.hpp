#pragma once

#include <array>
#include <complex>

#include "rydgate/model.hpp"

// Closed-form adiabatic and limiting results. All phases follow the gate
// convention U = diag(1, e^{i alpha}, e^{i alpha}, e^{i beta}), i.e. the phase
// of an adiabatically followed state is minus the time integral of its dressed
// energy. Integrals run over the full window [-W, W]. Everything here assumes
// a resonant drive (delta = 0) and throws ValidationError otherwise.

namespace rydgate {

struct DressedPair {
    double plus;   // (-omega_e + Omega_e) / 2
    double minus;  // (-omega_e - Omega_e) / 2
};

// Eigenvalues of the SingleRotating Hamiltonian.
DressedPair dressed_energies_single(double t, const SystemParams& s);

// -int E dt along the state connected to |1>: E_+ for omega_e > 0, E_- for omega_e < 0.
double alpha_adiabatic(const SystemParams& s);

// -(1/4) sqrt(pi/2) Omega0^2 t_p / omega_e (Gaussian envelope, omega_e >> Omega).
double alpha_ae_limit(const SystemParams& s);

// Eigenvalues of the TripleRotating Hamiltonian from the trigonometric cubic
// solution, indexed by k: E_0 largest, E_1 smallest, E_2 middle.
//   p = Omega^2 + omega_e^2 - V omega_e + V^2/3
//   q = Omega^2 V/6 - V omega_e^2/3 + V^2 omega_e/3 - 2V^3/27   (q = -det(H - tr(H)/3))
//   E_k = V/3 - omega_e + sqrt(4p/3) cos((arccos x + 2 k pi)/3),  x = -(3q/p) sqrt(3/(4p))
struct DressedSpectrum {
    std::array<double, 3> energies{};
    int branch = 0;  // state connected to |11>, see branch_index
    double p = 0.0;
    double q = 0.0;
};

DressedSpectrum cubic_energies(double omega, double omega_e, double v);
DressedSpectrum dressed_energies_three(double t, const SystemParams& s);

// k = 1 for omega_e < 0, k = 2 for 0 < omega_e < V/2, k = 0 for omega_e > V/2.
// Throws CriticalPointError at omega_e = 0 and omega_e = V/2.
int branch_index(double omega_e, double v);

// -int E_k dt with k = branch_index(omega_e, V).
double beta_adiabatic(const SystemParams& s);
// Same integral along an explicitly chosen branch.
double beta_adiabatic_on_branch(const SystemParams& s, int k);

// Adiabatic elimination of |W> and |rr>:
//   -(1/2) int Omega^2 / (omega_e + Omega^2 / (2 (V - 2 omega_e))) dt.
// Throws CriticalPointError when V = 2 omega_e.
double beta_ae_limit(const SystemParams& s);
// Leading terms for a Gaussian pulse:
//   -(1/2) sqrt(pi/2) Omega0^2 t_p / omega_e + (sqrt(pi)/8) Omega0^4 t_p / (omega_e^2 (V - 2 omega_e)).
double beta_ae_expanded(const SystemParams& s);

// Two-photon resonance V = 2 omega_e.
struct ResonantAmplitudes {
    std::complex<double> a11;
    std::complex<double> arr;
    double beta;
};
// a11 = cos(b) e^{ib}, arr = i sin(b) e^{ib}, b = (1/4) int (omega_e - sqrt(omega_e^2 + 4 Omega^2)) dt.
// The integral is real; see README for the sign and factor convention.
ResonantAmplitudes resonant_case(const SystemParams& s);

// omega_e = 0: 0 if cos(S/2) > 0, pi if cos(S/2) < 0. Throws DomainError when
// |cos(S/2)| < 1e-10 (population left in |r>).
double rabi_case_alpha(const SystemParams& s);

// -int Omega^2 / (4 omega_e) dt from the second-order average Hamiltonian.
double magnus_effective_phase(const SystemParams& s);

struct TripleMargin {
    double margin = 0.0;
    int skipped = 0;  // samples where E_k = 0, V - 2 omega_e = E_k or Omega = 0
};

// max_t |2 dOmega/dt (E_k + E_l + 2 omega_e)| / (Omega^3 N_k N_l (E_l - E_k)^2),
// N_k = sqrt(E_k^-2 + 2 Omega^-2 + (V - 2 omega_e - E_k)^-2). +inf on a degenerate pair.
TripleMargin adiabaticity_margin_triple(const SystemParams& s, int k, int l, int samples = 10000);

// Largest margin between the branch connected to |11> and the other two states.
double adiabaticity_margin_branch(const SystemParams& s, int samples = 10000);

}  // namespace rydgate
