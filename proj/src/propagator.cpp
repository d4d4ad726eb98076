#include "rydgate/propagator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>

#include <boost/numeric/odeint.hpp>

#include "rydgate/errors.hpp"
#include "rydgate/io.hpp"

namespace rydgate {

namespace {

namespace ode = boost::numeric::odeint;

constexpr cplx I{0.0, 1.0};


// Upper bound on the rate at which any amplitude phase can wind.
double frequency_scale(const SystemParams& s) {
    const double we = s.pulse.omega_e;
    const double diag = std::max({std::abs(we), std::abs(s.delta - we),
                                  std::abs(s.v + 2.0 * s.delta - 2.0 * we), 2.0 * std::abs(s.delta) + s.v});
    return std::max({diag + std::sqrt(2.0) * s.pulse.omega0, std::abs(we),
                     std::hypot(we, s.pulse.omega0), 1.0 / s.pulse.t_p});
}

// Per-step error bound. Local errors add up roughly once per oscillation
// period, so the bound shrinks with the number of periods in the window.
double local_tolerance(const SystemParams& s, double tol) {
    const double periods = frequency_scale(s) * 2.0 * window(s.pulse) / (2.0 * std::numbers::pi);
    return tol / std::max(10.0, 4.0 * periods);
}

template <int N>
using State = std::array<cplx, N>;

template <int N>
struct Schroedinger {
    const SystemParams& s;

    void operator()(const State<N>& x, State<N>& dxdt, double t) const {
        const auto h = hamiltonian_fixed<N>(t, s);
        Eigen::Map<const Eigen::Matrix<cplx, N, 1>> psi(x.data());
        Eigen::Map<Eigen::Matrix<cplx, N, 1>> out(dxdt.data());
        out.noalias() = -I * (h * psi);
    }
};

// Advances x from t to each requested time in turn, landing on it exactly,
// and hands the state to `observe` after every landing.
template <int N, class Observer>
void integrate_to(const SystemParams& s, State<N>& x, double t0, const std::vector<double>& times,
                  double tol, Observer&& observe) {
    auto stepper = ode::make_controlled(local_tolerance(s, tol), local_tolerance(s, tol), ode::runge_kutta_dopri5<State<N>>());
    const Schroedinger<N> rhs{s};
    const double span = std::max(times.back() - t0, 1.0);
    const double dt_min = 1e-14 * span;
    double t = t0;
    double dt = 1e-3 * s.pulse.t_p;
    for (double target : times) {
        int failures = 0;
        while (t < target) {
            const bool clipped = t + dt > target;
            const double dt_free = dt;
            if (clipped) {
                dt = target - t;
            }
            const double t_before = t;
            if (stepper.try_step(rhs, x, t, dt) == ode::success) {
                failures = 0;
                if (clipped) {
                    t = target;  // guard against round-off in t + dt
                    dt = std::max(dt, dt_free);
                }
            } else {
                if (dt < dt_min || ++failures > 500) {
                    throw IntegrationError(t_before, "step size underflow");
                }
            }
        }
        observe(target, x);
    }
}

template <int N>
State<N> to_state(const StateVector& psi) {
    State<N> x{};
    std::copy(psi.amplitudes.begin(), psi.amplitudes.end(), x.begin());
    return x;
}

void check_tolerance(double tol) {
    if (!(tol >= 1e-13 && tol <= 1e-6)) {
        throw ValidationError("tol", "must lie in [1e-13, 1e-6]");
    }
}

template <int N>
StateVector propagate_fixed(const SystemParams& s, const StateVector& psi0, double tol) {
    State<N> x = to_state<N>(psi0);
    const double w = window(s.pulse);
    integrate_to<N>(s, x, -w, {w}, tol, [](double, const State<N>&) {});
    return {psi0.basis, std::vector<cplx>(x.begin(), x.end())};
}

// Dense-output sweep of the window: natural steps, interpolated samples at
// `times`, and an exact landing on the final time.
template <int N, class Observer>
State<N> integrate_dense(const SystemParams& s, State<N> x, double t0, const std::vector<double>& times,
                         double tol, Observer&& observe) {
    auto stepper = ode::make_dense_output(local_tolerance(s, tol), local_tolerance(s, tol), ode::runge_kutta_dopri5<State<N>>());
    const Schroedinger<N> rhs{s};
    const double t_end = times.back();
    const double dt_min = 1e-14 * std::max(t_end - t0, 1.0);
    stepper.initialize(x, t0, 1e-3 * s.pulse.t_p);
    std::size_t next = 0;
    State<N> sample{};
    while (next < times.size() - 1) {
        const double remaining = t_end - stepper.current_time();
        if (remaining <= 10.0 * dt_min) {
            break;
        }
        if (stepper.current_time_step() > remaining) {
            stepper.initialize(stepper.current_state(), stepper.current_time(), remaining);
        }
        try {
            stepper.do_step(rhs);
        } catch (const ode::step_adjustment_error&) {
            throw IntegrationError(stepper.current_time(), "step size underflow");
        }
        if (stepper.current_time_step() < dt_min && t_end - stepper.current_time() > 10.0 * dt_min) {
            throw IntegrationError(stepper.current_time(), "step size underflow");
        }
        while (next < times.size() - 1 && times[next] <= stepper.current_time()) {
            stepper.calc_state(times[next], sample);
            observe(times[next], sample);
            ++next;
        }
    }
    // Finish exactly on t_end with full-order steps.
    x = stepper.current_state();
    double t = stepper.current_time();
    if (t < t_end) {
        std::vector<double> last{t_end};
        integrate_to<N>(s, x, t, last, tol, [](double, const State<N>&) {});
    }
    observe(t_end, x);
    return x;
}

template <int N>
PhaseResult phase_fixed(const SystemParams& s, HamiltonianKind kind, int index, const PhaseOptions& opt) {
    const double w = window(s.pulse);
    const double period = 2.0 * std::numbers::pi / frequency_scale(s);
    const double dt_sample = period / opt.samples_per_period;
    const auto intervals = static_cast<std::size_t>(std::max(400.0, std::ceil(2.0 * w / dt_sample)));
    std::vector<double> times(intervals);
    for (std::size_t i = 0; i < intervals; ++i) {
        times[i] = -w + 2.0 * w * static_cast<double>(i + 1) / static_cast<double>(intervals);
    }
    times.back() = w;

    PhaseResult result;
    const StateVector psi0 = StateVector::basis_state(kind, index);
    cplx previous = 1.0;
    double phase = 0.0;
    if (opt.record_trace) {
        result.trace.reserve(intervals + 1);
        result.trace.push_back({-w, psi0.amplitudes, 0.0});
    }
    const State<N> x = integrate_dense<N>(s, to_state<N>(psi0), -w, times, opt.tol,
                                          [&](double t, const State<N>& state) {
        const cplx a = state[index];
        const double increment = std::arg(a / previous);
        const double magnitude = std::abs(a);
        result.min_amplitude = std::min(result.min_amplitude, magnitude);
        if (magnitude < 1e-6 || std::abs(increment) > 0.5 * std::numbers::pi) {
            result.unwrap_unreliable = true;
        }
        phase += increment;
        previous = a;
        if (opt.record_trace) {
            result.trace.push_back({t, std::vector<cplx>(state.begin(), state.end()), phase});
        }
    });
    result.phase = phase;
    result.return_population = std::norm(x[index]);
    result.final_state = {kind, std::vector<cplx>(x.begin(), x.end())};
    return result;
}

double max_residual(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double r = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        r = std::max(r, std::abs(a[i] - b[i]));
    }
    return r;
}

}  // namespace

StateVector StateVector::basis_state(HamiltonianKind kind, int index) {
    const int n = dimension(kind);
    if (index < 0 || index >= n) {
        throw ValidationError("index", "basis index out of range for " + to_string(kind));
    }
    StateVector psi{kind, std::vector<cplx>(n, 0.0)};
    psi.amplitudes[index] = 1.0;
    return psi;
}

double StateVector::norm() const {
    double sum = 0.0;
    for (const cplx& a : amplitudes) {
        sum += std::norm(a);
    }
    return std::sqrt(sum);
}

StateVector propagate(const SystemParams& s, const StateVector& psi0, double tol) {
    validate(s);
    check_tolerance(tol);
    if (psi0.dim() != dimension(psi0.basis)) {
        throw ValidationError("psi0", "dimension does not match basis");
    }
    switch (psi0.basis) {
        case HamiltonianKind::SingleRotating: return propagate_fixed<2>(s, psi0, tol);
        case HamiltonianKind::TripleRotating: return propagate_fixed<3>(s, psi0, tol);
        case HamiltonianKind::FullRWA: return propagate_fixed<9>(s, psi0, tol);
    }
    throw ValidationError("kind", "unknown Hamiltonian kind");
}

PhaseResult phase_of(const SystemParams& s, HamiltonianKind kind, int index, const PhaseOptions& options) {
    validate(s);
    check_tolerance(options.tol);
    if (options.samples_per_period < 40) {
        throw ValidationError("samples_per_period", "must be >= 40");
    }
    switch (kind) {
        case HamiltonianKind::SingleRotating: return phase_fixed<2>(s, kind, index, options);
        case HamiltonianKind::TripleRotating: return phase_fixed<3>(s, kind, index, options);
        case HamiltonianKind::FullRWA: return phase_fixed<9>(s, kind, index, options);
    }
    throw ValidationError("kind", "unknown Hamiltonian kind");
}

double SubspaceResidual::max() const { return std::max({single_10, single_01, triple_11}); }

SubspaceResidual subspace_consistency(const SystemParams& s, double tol) {
    using K = HamiltonianKind;
    const double w = window(s.pulse);
    const double we = s.pulse.omega_e;

    const StateVector single = propagate(s, StateVector::basis_state(K::SingleRotating, 0), tol);
    const StateVector triple = propagate(s, StateVector::basis_state(K::TripleRotating, 0), tol);
    const auto r1 = frame_transform(w, we, K::SingleRotating);
    const auto r3 = frame_transform(w, we, K::TripleRotating);

    // Full basis index 3*a + b with levels 0, 1, r -> 0, 1, 2.
    std::vector<cplx> expect_10(9, 0.0), expect_01(9, 0.0), expect_11(9, 0.0);
    expect_10[3] = r1[0] * single.amplitudes[0];
    expect_10[6] = r1[1] * single.amplitudes[1];
    expect_01[1] = r1[0] * single.amplitudes[0];
    expect_01[2] = r1[1] * single.amplitudes[1];
    const cplx w_component = r3[1] * triple.amplitudes[1] / std::sqrt(2.0);
    expect_11[4] = r3[0] * triple.amplitudes[0];
    expect_11[5] = w_component;
    expect_11[7] = w_component;
    expect_11[8] = r3[2] * triple.amplitudes[2];

    SubspaceResidual out;
    out.single_10 = max_residual(propagate(s, StateVector::basis_state(K::FullRWA, 3), tol).amplitudes, expect_10);
    out.single_01 = max_residual(propagate(s, StateVector::basis_state(K::FullRWA, 1), tol).amplitudes, expect_01);
    out.triple_11 = max_residual(propagate(s, StateVector::basis_state(K::FullRWA, 4), tol).amplitudes, expect_11);
    return out;
}

void write_trace_csv(std::ostream& os, HamiltonianKind kind, const std::vector<TracePoint>& trace) {
    const auto labels = basis_labels(kind);
    os << "t";
    for (const auto& l : labels) {
        os << ",re_" << l << ",im_" << l;
    }
    for (const auto& l : labels) {
        os << ",pop_" << l;
    }
    os << ",unwrapped_phase\n";
    for (const TracePoint& p : trace) {
        os << fmt17(p.t);
        for (const cplx& a : p.amplitudes) {
            os << ',' << fmt17(a.real()) << ',' << fmt17(a.imag());
        }
        for (const cplx& a : p.amplitudes) {
            os << ',' << fmt17(std::norm(a));
        }
        os << ',' << fmt17(p.phase) << '\n';
    }
}

}  // namespace rydgate
