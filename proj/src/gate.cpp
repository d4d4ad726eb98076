#include "rydgate/gate.hpp"

#include <algorithm>
#include <cmath>

namespace rydgate {

namespace {
constexpr cplx I{0.0, 1.0};
}

GateReport assemble(double alpha, double beta) {
    GateReport r;
    r.alpha = alpha;
    r.beta = beta;
    r.unitary = {1.0, std::polar(1.0, alpha), std::polar(1.0, alpha), std::polar(1.0, beta)};
    r.fidelity_cz = cz_fidelity(alpha, beta);
    r.entangling_power = entangling_power(alpha, beta);
    r.entangling_phase = 2.0 * alpha - beta;
    return r;
}

double cz_fidelity(double alpha, double beta) {
    return (3.0 + 2.0 * std::cos(alpha) - std::cos(beta) - 2.0 * std::cos(alpha - beta)) / 8.0;
}

double hilbert_schmidt_fidelity(const Eigen::Matrix4cd& target, const Eigen::Matrix4cd& u) {
    return std::norm((target.adjoint() * u).trace()) / 16.0;
}

Eigen::Matrix4cd cz_matrix() { return Eigen::Vector4cd(1.0, 1.0, 1.0, -1.0).asDiagonal(); }

Eigen::Matrix4cd diagonal_unitary(double alpha, double beta) {
    const GateReport r = assemble(alpha, beta);
    return Eigen::Vector4cd(r.unitary[0], r.unitary[1], r.unitary[2], r.unitary[3]).asDiagonal();
}

double entangling_power(double alpha, double beta) {
    const double s = std::sin(0.5 * (2.0 * alpha - beta));
    return kMaxEntanglingPower * s * s;
}

CartanFactors cartan_factors(double alpha, double beta) {
    return {(2.0 * alpha + beta) / 4.0, beta / 4.0, (2.0 * alpha - beta) / 4.0};
}

Eigen::Matrix4cd cartan_reassemble(const CartanFactors& f) {
    const Eigen::Matrix2cd sz = Eigen::Vector2cd(-1.0, 1.0).asDiagonal();
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const auto kron = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
        Eigen::Matrix4cd out;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
            }
        }
        return out;
    };
    // all factors are diagonal, so exponentials act entrywise on the diagonal
    const auto expi = [](const Eigen::Matrix4cd& diag, cplx scale) {
        Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
        for (int i = 0; i < 4; ++i) {
            out(i, i) = std::exp(scale * diag(i, i));
        }
        return out;
    };
    const Eigen::Matrix4cd local = expi(kron(sz, id) + kron(id, sz), I * f.local_angle);
    const Eigen::Matrix4cd entangler = expi(kron(sz, sz), -I * f.entangling_angle);
    return std::exp(I * f.global_phase) * local * entangler;
}

GateReport gate_from_dynamics(const SystemParams& s, double tol) {
    PhaseOptions opt;
    opt.tol = tol;
    const PhaseResult single = phase_of(s, HamiltonianKind::SingleRotating, 0, opt);
    const PhaseResult triple = phase_of(s, HamiltonianKind::TripleRotating, 0, opt);
    GateReport r = assemble(single.phase, triple.phase);
    r.return_population_single = single.return_population;
    r.return_population_triple = triple.return_population;
    r.leakage = std::max(0.0, 1.0 - std::min(single.return_population, triple.return_population));
    r.leakage_flag = r.leakage > kLeakageFlagThreshold;
    r.unwrap_unreliable = single.unwrap_unreliable || triple.unwrap_unreliable;
    return r;
}

void to_json(nlohmann::json& j, const GateReport& r) {
    j = nlohmann::json{{"alpha", r.alpha},
                       {"beta", r.beta},
                       {"fidelity_cz", r.fidelity_cz},
                       {"entangling_power", r.entangling_power},
                       {"entangling_phase", r.entangling_phase},
                       {"leakage", r.leakage}};
}

}  // namespace rydgate
