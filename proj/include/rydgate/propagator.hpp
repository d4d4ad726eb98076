#pragma once

#include <iosfwd>
#include <vector>

#include "rydgate/model.hpp"

// Adaptive integration of i dpsi/dt = H(t) psi over the pulse window and
// continuous phase tracking of a chosen basis amplitude.

namespace rydgate {

struct StateVector {
    HamiltonianKind basis = HamiltonianKind::SingleRotating;
    std::vector<cplx> amplitudes;

    static StateVector basis_state(HamiltonianKind kind, int index);
    int dim() const { return static_cast<int>(amplitudes.size()); }
    double norm() const;
};

inline constexpr double kDefaultTolerance = 1e-10;

// Integrates from -W to +W. tol in [1e-13, 1e-6] (absolute and relative).
// Throws IntegrationError when the step size underflows.
StateVector propagate(const SystemParams& s, const StateVector& psi0, double tol = kDefaultTolerance);

struct TracePoint {
    double t;
    std::vector<cplx> amplitudes;
    double phase;  // unwrapped phase of the tracked amplitude
};

struct PhaseResult {
    double phase = 0.0;              // unwrapped, not reduced mod 2 pi
    double return_population = 1.0;  // |tracked amplitude|^2 at +W
    bool unwrap_unreliable = false;  // tracked amplitude dropped below 1e-6 somewhere
    double min_amplitude = 1.0;
    StateVector final_state;
    std::vector<TracePoint> trace;   // filled only when requested
};

struct PhaseOptions {
    double tol = kDefaultTolerance;
    bool record_trace = false;
    int samples_per_period = 40;
};

// Phase of basis state `index` relative to the stationary |00>, tracked
// continuously from -W to +W starting in that basis state.
PhaseResult phase_of(const SystemParams& s, HamiltonianKind kind, int index,
                     const PhaseOptions& options = {});

struct SubspaceResidual {
    double single_10 = 0.0;  // |10> in FullRWA vs SingleRotating
    double single_01 = 0.0;  // |01> in FullRWA vs SingleRotating
    double triple_11 = 0.0;  // |11> in FullRWA vs TripleRotating
    double max() const;
};

// Propagates |10>, |01>, |11> in FullRWA and compares against the reduced
// rotating-frame problems mapped back through R(W). Residuals are maximal
// absolute amplitude differences over all nine components.
SubspaceResidual subspace_consistency(const SystemParams& s, double tol = kDefaultTolerance);

// CSV: t, re_<label>, im_<label> ..., pop_<label> ..., unwrapped_phase
void write_trace_csv(std::ostream& os, HamiltonianKind kind, const std::vector<TracePoint>& trace);

}  // namespace rydgate
