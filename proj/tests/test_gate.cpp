#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rydgate/gate.hpp"

using namespace rydgate;
using std::numbers::pi;

namespace {

// |Tr(CZ^dag U)|^2 / 16 from explicitly built 4x4 matrices
double trace_fidelity(double a, double b) {
    Eigen::Matrix4cd cz = Eigen::Matrix4cd::Identity();
    cz(3, 3) = -1.0;
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    u(0, 0) = 1.0;
    u(1, 1) = std::polar(1.0, a);
    u(2, 2) = std::polar(1.0, a);
    u(3, 3) = std::polar(1.0, b);
    return std::norm((cz.adjoint() * u).trace()) / 16.0;
}

// e^{i g} (e^{i l sz} x e^{i l sz}) e^{-i c sz x sz}, built with Kronecker products
// of the (diagonal) single-qubit factors
Eigen::Matrix4cd cartan_oracle(double g, double l, double c) {
    const Eigen::Vector2d z(-1.0, 1.0);  // sz|0> = -|0>, sz|1> = |1>
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
            const cplx local = std::polar(1.0, l * z(i)) * std::polar(1.0, l * z(k));
            m(2 * i + k, 2 * i + k) = std::polar(1.0, g) * local * std::polar(1.0, -c * z(i) * z(k));
        }
    return m;
}

}  // namespace

TEST_CASE("assemble") {
    const GateReport id = assemble(0.0, 0.0);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(id.unitary[i] - cplx(1.0)) < 1e-15);
    CHECK(id.fidelity_cz == doctest::Approx(0.25));
    CHECK(id.entangling_power == doctest::Approx(0.0));

    const GateReport cz = assemble(-2 * pi, -3 * pi);
    CHECK(cz.fidelity_cz == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cz.entangling_power == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
    CHECK(cz.entangling_phase == doctest::Approx(-pi));
    CHECK(std::abs(cz.unitary[3] - cplx(-1.0)) < 1e-14);

    for (double a : {-3.0, 0.4, 7.7}) {
        CHECK(std::abs(assemble(a, 2 * a).entangling_power) < 1e-15);
    }
}

TEST_CASE("CZ fidelity") {
    CHECK(cz_fidelity(-2 * pi, -3 * pi) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cz_fidelity(0.0, 0.0) == doctest::Approx(0.25));
    CHECK(cz_fidelity(pi, 0.0) == doctest::Approx(0.25));
    CHECK(hilbert_schmidt_fidelity(cz_matrix(), diagonal_unitary(0.3, -1.2)) ==
          doctest::Approx(cz_fidelity(0.3, -1.2)).epsilon(1e-14));
}

TEST_CASE("closed-form fidelity equals the trace form") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> P(-20, 20);
    for (int i = 0; i < 2000; ++i) {
        const double a = P(rng), b = P(rng);
        const double f = cz_fidelity(a, b);
        CHECK(std::abs(f - trace_fidelity(a, b)) <= 1e-12);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
    }
}

TEST_CASE("entangling power") {
    CHECK(entangling_power(0.0, -pi) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
    CHECK(entangling_power(1.3, 2.6) == doctest::Approx(0.0));
    CHECK(entangling_power(pi / 4, 0.0) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> P(-20, 20);
    for (int i = 0; i < 1000; ++i) {
        const double e = entangling_power(P(rng), P(rng));
        CHECK(e >= 0.0);
        CHECK(e <= 2.0 / 9.0 + 1e-12);
    }
}

TEST_CASE("metrics are 2 pi periodic in each phase") {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> P(-10, 10);
    for (int i = 0; i < 500; ++i) {
        const double a = P(rng), b = P(rng);
        for (auto [da, db] : {std::pair{2 * pi, 0.0}, std::pair{0.0, 2 * pi}, std::pair{-2 * pi, 2 * pi}}) {
            CHECK(std::abs(cz_fidelity(a + da, b + db) - cz_fidelity(a, b)) <= 1e-12);
            CHECK(std::abs(entangling_power(a + da, b + db) - entangling_power(a, b)) <= 1e-12);
        }
    }
}

TEST_CASE("unit fidelity only at CZ-equivalent phases") {
    for (auto [a0, b0] : {std::pair{-2 * pi, -3 * pi}, std::pair{0.0, pi}, std::pair{2 * pi, -pi}}) {
        int at_one = 0;
        for (int i = -50; i <= 50; ++i) {
            for (int j = -50; j <= 50; ++j) {
                const double f = cz_fidelity(a0 + 1e-3 * i, b0 + 1e-3 * j);
                if (f >= 1.0 - 1e-12) {
                    ++at_one;
                    CHECK(i == 0);
                    CHECK(j == 0);
                }
            }
        }
        CHECK(at_one == 1);
    }
    // phase pairs off the CZ class never reach one
    CHECK(cz_fidelity(pi, pi) < 1.0 - 1e-3);
    CHECK(cz_fidelity(0.0, 0.0) < 1.0 - 1e-3);
}

TEST_CASE("Cartan factors") {
    const CartanFactors zero = cartan_factors(0.0, 0.0);
    CHECK(zero.global_phase == 0.0);
    CHECK(zero.local_angle == 0.0);
    CHECK(zero.entangling_angle == 0.0);

    const CartanFactors cz = cartan_factors(-2 * pi, -3 * pi);
    CHECK(cz.global_phase == doctest::Approx(-7 * pi / 4));
    CHECK(cz.local_angle == doctest::Approx(-3 * pi / 4));
    CHECK(cz.entangling_angle == doctest::Approx(-pi / 4));
    const Eigen::Matrix4cd m = cartan_reassemble(cz);
    CHECK(std::norm((cz_matrix().adjoint() * m).trace()) / 16.0 == doctest::Approx(1.0).epsilon(1e-14));

    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> P(-10, 10);
    for (int i = 0; i < 100; ++i) {
        const double a = P(rng), b = P(rng);
        const CartanFactors f = cartan_factors(a, b);
        const Eigen::Matrix4cd target = diagonal_unitary(a, b);
        CHECK((cartan_reassemble(f) - target).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((cartan_oracle(f.global_phase, f.local_angle, f.entangling_angle) - target).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("gate from dynamics") {
    const GateReport idle = gate_from_dynamics(oracle::system(0.0, 10.0, 50.0));
    CHECK(idle.alpha == doctest::Approx(0.0));
    CHECK(idle.beta == doctest::Approx(0.0));
    CHECK(idle.leakage == doctest::Approx(0.0));
    CHECK_FALSE(idle.leakage_flag);

    const GateReport d = gate_from_dynamics(oracle::system(16.29, 10.0, 53.59));
    CHECK(d.fidelity_cz >= 0.9999);
    CHECK(std::abs(d.entangling_power - 2.0 / 9.0) <= 1e-4);
    CHECK(d.leakage <= 1e-3);
    CHECK(d.fidelity_cz == doctest::Approx(cz_fidelity(d.alpha, d.beta)).epsilon(1e-15));

    const GateReport res = gate_from_dynamics(oracle::system(5.0, 25.0, 50.0));
    CHECK(res.leakage_flag);
    CHECK(res.return_population_triple < 0.9);

    nlohmann::json j = d;
    for (const char* key : {"alpha", "beta", "fidelity_cz", "entangling_power", "entangling_phase", "leakage"}) {
        CHECK(j.contains(key));
    }
}
