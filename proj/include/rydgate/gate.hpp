#pragma once

#include <array>

#include <Eigen/Dense>
#include <json.hpp>

#include "rydgate/model.hpp"
#include "rydgate/propagator.hpp"

// The diagonal two-qubit phase gate U = diag(1, e^{i alpha}, e^{i alpha}, e^{i beta})
// in the computational order |00>, |01>, |10>, |11>, and its figures of merit.

namespace rydgate {

inline constexpr double kMaxEntanglingPower = 2.0 / 9.0;
inline constexpr double kLeakageFlagThreshold = 1e-4;

struct GateReport {
    double alpha = 0.0;
    double beta = 0.0;
    std::array<cplx, 4> unitary{};  // diagonal
    double fidelity_cz = 0.0;
    double entangling_power = 0.0;
    double entangling_phase = 0.0;  // 2 alpha - beta
    double leakage = 0.0;           // 1 - min(return populations)
    double return_population_single = 1.0;  // |<1|psi(W)>|^2
    double return_population_triple = 1.0;  // |<11|psi(W)>|^2
    bool leakage_flag = false;      // leakage > kLeakageFlagThreshold
    bool unwrap_unreliable = false;
};

GateReport assemble(double alpha, double beta);

// (1/8)[3 + 2 cos a - cos b - 2 cos(a - b)]
double cz_fidelity(double alpha, double beta);
// |Tr(target^dagger U)|^2 / d^2
double hilbert_schmidt_fidelity(const Eigen::Matrix4cd& target, const Eigen::Matrix4cd& u);
Eigen::Matrix4cd cz_matrix();
Eigen::Matrix4cd diagonal_unitary(double alpha, double beta);

// (2/9) sin^2((2 alpha - beta)/2)
double entangling_power(double alpha, double beta);

// U = e^{i g} (e^{i l sz} (x) e^{i l sz}) e^{-i c sz(x)sz} with g = (2a+b)/4,
// l = b/4, c = (2a-b)/4 and sz|1> = |1>, sz|0> = -|0>.
struct CartanFactors {
    double global_phase;
    double local_angle;
    double entangling_angle;
};
CartanFactors cartan_factors(double alpha, double beta);
Eigen::Matrix4cd cartan_reassemble(const CartanFactors& f);

// alpha from |1> in the single-atom frame, beta from |11> in the three-level
// frame, both tracked continuously.
GateReport gate_from_dynamics(const SystemParams& s, double tol = kDefaultTolerance);

void to_json(nlohmann::json& j, const GateReport& r);

}  // namespace rydgate
