#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rydgate/errors.hpp"
#include "rydgate/model.hpp"

using namespace rydgate;
using std::numbers::pi;

TEST_CASE("envelope values") {
    PulseParams p;
    p.omega0 = 2.0;
    CHECK(envelope(0.0, p) == 2.0);
    CHECK(envelope(1.0, p) == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-15));
    CHECK(envelope(10.0, p) == 0.0);
    CHECK(envelope(-4.6, p) == 0.0);
    CHECK(envelope(4.5, p) > 0.0);
}

TEST_CASE("window edge is below 1.3e-4 of the peak for any allowed half-width") {
    PulseParams p;
    p.omega0 = 1.0;
    p.window_halfwidth = 3.0;
    CHECK(envelope(3.0, p) < 1.3e-4);
}

TEST_CASE("quadratures") {
    PulseParams p;
    p.omega0 = 1.0;
    p.omega_e = 10.0;
    const Quadratures q0 = quadratures(0.0, p);
    CHECK(q0.x == 0.0);
    CHECK(q0.y == 1.0);
    const Quadratures q = quadratures(pi / 20.0, p);
    CHECK(q.x == doctest::Approx(std::exp(-std::pow(pi / 20.0, 2))).epsilon(1e-14));
    CHECK(std::abs(q.y) < 1e-15);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> T(-4.5, 4.5), W(-60, 60), O(0, 60);
    for (int i = 0; i < 1000; ++i) {
        p.omega0 = O(rng);
        p.omega_e = W(rng);
        const double t = T(rng);
        const Quadratures qi = quadratures(t, p);
        const double om2 = std::pow(envelope(t, p), 2);
        CHECK(std::abs(qi.x * qi.x + qi.y * qi.y - om2) <= 1e-14 * std::max(om2, 1e-300));
    }
}

TEST_CASE("pulse area") {
    PulseParams p;
    p.omega0 = 1.0;
    const double full = std::sqrt(pi) * std::erf(4.5);
    CHECK(pulse_area(p) == doctest::Approx(full).epsilon(1e-10));
    CHECK(pulse_area(p) == doctest::Approx(std::sqrt(pi)).epsilon(1e-9));
    CHECK(pulse_area(p, 0.0) == doctest::Approx(std::sqrt(pi) / 2.0).epsilon(1e-9));
    p.omega0 = 0.0;
    CHECK(pulse_area(p) == 0.0);
    p.omega0 = 3.0;
    p.t_p = 2.0;
    p.window_halfwidth = 3.5;
    CHECK(pulse_area(p) == doctest::Approx(3.0 * 2.0 * std::sqrt(pi) * std::erf(3.5)).epsilon(1e-10));
    // against an independent rule
    const double ref = oracle::simpson([&](double t) { return oracle::gaussian(t, 3.0, 2.0, 3.5); }, -7.0, 1.3);
    CHECK(pulse_area(p, 1.3) == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("rotating-frame Hamiltonians") {
    SystemParams s = oracle::system(0.0, 10.0, 50.0);
    const Eigen::MatrixXcd h1 = hamiltonian(0.0, s, HamiltonianKind::SingleRotating);
    CHECK(h1.rows() == 2);
    CHECK(h1(0, 0) == cplx(0.0));
    CHECK(h1(1, 1) == cplx(-10.0));
    CHECK(h1(0, 1) == cplx(0.0));

    s.v = 20.0;  // V = 2 omega_e
    const Eigen::MatrixXcd h3 = hamiltonian(0.0, s, HamiltonianKind::TripleRotating);
    CHECK(h3(0, 0) == cplx(0.0));
    CHECK(h3(1, 1) == cplx(-10.0));
    CHECK(h3(2, 2) == cplx(0.0));
    CHECK(h3.isDiagonal());

    s = oracle::system(3.0, 7.0, 40.0, 0.5);
    const double t = 0.3;
    CHECK((hamiltonian(t, s, HamiltonianKind::SingleRotating) - oracle::single_rotating(t, s)).norm() < 1e-14);
    CHECK((hamiltonian(t, s, HamiltonianKind::TripleRotating) - oracle::triple_rotating(t, s)).norm() < 1e-14);
}

TEST_CASE("full Hamiltonian matches the Kronecker assembly") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> T(-4.5, 4.5), W(-40, 40), O(0, 40), V(0, 80), D(-2, 2);
    for (int i = 0; i < 50; ++i) {
        const SystemParams s = oracle::system(O(rng), W(rng), V(rng), D(rng));
        const double t = T(rng);
        const Eigen::MatrixXcd h = hamiltonian(t, s, HamiltonianKind::FullRWA);
        CHECK((h - oracle::full_hamiltonian(t, s)).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("Hamiltonians are Hermitian") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> T(-5, 5), W(-40, 40), O(0, 40), V(0, 80), D(-2, 2);
    for (int i = 0; i < 200; ++i) {
        const SystemParams s = oracle::system(O(rng), W(rng), V(rng), D(rng));
        const double t = T(rng);
        for (auto kind : {HamiltonianKind::SingleRotating, HamiltonianKind::TripleRotating, HamiltonianKind::FullRWA}) {
            const Eigen::MatrixXcd h = hamiltonian(t, s, kind);
            CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
        }
    }
}

TEST_CASE("full Hamiltonian spectrum with the drive off") {
    const SystemParams s = oracle::system(0.0, 10.0, 50.0);
    const Eigen::MatrixXcd h = hamiltonian(0.0, s, HamiltonianKind::FullRWA);
    const Eigen::VectorXd e = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h).eigenvalues();
    for (int i = 0; i < 8; ++i) {
        CHECK(std::abs(e(i)) < 1e-14);
    }
    CHECK(e(8) == doctest::Approx(50.0));
}

TEST_CASE("frame transformation maps the full problem onto the reduced ones") {
    // H_rot = P^dag H P - i P^dag dP/dt with P the isometry psi_field = P psi_rot
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> T(-4.5, 4.5), W(-40, 40), O(0, 40), V(0, 80), D(-2, 2);
    for (int i = 0; i < 50; ++i) {
        const SystemParams s = oracle::system(O(rng), W(rng), V(rng), D(rng));
        const double t = T(rng);
        const double we = s.pulse.omega_e;
        const Eigen::Matrix<cplx, 9, 9> H = oracle::full_hamiltonian(t, s);

        const auto r1 = frame_transform(t, we, HamiltonianKind::SingleRotating);
        for (auto [ground, excited] : {std::pair{3, 6}, std::pair{1, 2}}) {  // |10>,|r0> and |01>,|0r>
            Eigen::Matrix<cplx, 9, 2> P = Eigen::Matrix<cplx, 9, 2>::Zero();
            P(ground, 0) = r1[0];
            P(excited, 1) = r1[1];
            Eigen::Matrix2cd rot = P.adjoint() * H * P;
            rot(1, 1) += -we;  // -i r^* dr/dt for r = i e^{-i we t}
            CHECK((rot - hamiltonian(t, s, HamiltonianKind::SingleRotating)).cwiseAbs().maxCoeff() <= 1e-12);
        }

        const auto r3 = frame_transform(t, we, HamiltonianKind::TripleRotating);
        Eigen::Matrix<cplx, 9, 3> P = Eigen::Matrix<cplx, 9, 3>::Zero();
        P(4, 0) = r3[0];
        P(5, 1) = r3[1] / std::sqrt(2.0);
        P(7, 1) = r3[1] / std::sqrt(2.0);
        P(8, 2) = r3[2];
        Eigen::Matrix3cd rot = P.adjoint() * H * P;
        rot(1, 1) += -we;
        rot(2, 2) += -2.0 * we;
        CHECK((rot - hamiltonian(t, s, HamiltonianKind::TripleRotating)).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("frame transform values") {
    const auto r = frame_transform(0.0, 5.0, HamiltonianKind::TripleRotating);
    CHECK(std::abs(r[0] - cplx(1.0)) < 1e-15);
    CHECK(std::abs(r[1] - cplx(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(r[2] - cplx(-1.0)) < 1e-15);
}

TEST_CASE("single-atom adiabaticity margin") {
    CHECK(adiabaticity_margin_single(oracle::system(0.0, 10.0)) == 0.0);

    const SystemParams s = oracle::system(1.0, 20.0);
    double ref = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double t = -4.5 + 9.0 * i / 9999.0;
        const double om = oracle::gaussian(t, 1.0);
        const double dom = -2.0 * t * om;
        ref = std::max(ref, std::abs(20.0 * dom) / (2.0 * std::pow(400.0 + om * om, 1.5)));
    }
    const double m = adiabaticity_margin_single(s);
    CHECK(m < 1e-3);
    CHECK(m == doctest::Approx(ref).epsilon(1e-9));

    CHECK(adiabaticity_margin_single(oracle::system(16.0, 0.1)) > 1e-2);
    CHECK(std::isinf(adiabaticity_margin_single(oracle::system(16.0, 0.0))));
}

TEST_CASE("non-adiabatic boundaries") {
    auto b = nonadiabatic_boundaries(1.0, 50.0);
    CHECK(b.near_zero == 2.0);
    CHECK(b.near_resonance == 2304.0);
    b = nonadiabatic_boundaries(25.0, 50.0);
    CHECK(b.near_zero == 1250.0);
    CHECK(b.near_resonance == 0.0);
    b = nonadiabatic_boundaries(10.0, 50.0);
    CHECK(b.near_zero == 200.0);
    CHECK(b.near_resonance == 900.0);
}

TEST_CASE("validation names the offending field") {
    const auto key_of = [](auto&& f) {
        try {
            f();
        } catch (const ValidationError& e) {
            return e.key();
        }
        return std::string("none");
    };
    SystemParams s;
    s.pulse.omega0 = -1.0;
    CHECK(key_of([&] { validate(s); }) == "omega0");
    s.pulse.omega0 = 1.0;
    s.pulse.t_p = 0.0;
    CHECK(key_of([&] { validate(s); }) == "t_p");
    s.pulse.t_p = 1.0;
    s.pulse.window_halfwidth = 2.0;
    CHECK(key_of([&] { validate(s); }) == "window_halfwidth");
    s.pulse.window_halfwidth = 4.5;
    s.v = -1.0;
    CHECK(key_of([&] { validate(s); }) == "v");
    s.v = 1.0;
    CHECK(key_of([&] { validate(s); }) == "none");
}

TEST_CASE("pluggable envelope") {
    auto shape = std::make_shared<EnvelopeShape>();
    shape->name = "sech";
    shape->profile = [](double x) { return 1.0 / std::cosh(x); };
    shape->slope = [](double x) { return -std::tanh(x) / std::cosh(x); };
    PulseParams p;
    p.omega0 = 2.0;
    p.shape = shape;
    CHECK(envelope(1.0, p) == doctest::Approx(2.0 / std::cosh(1.0)));
    CHECK(envelope_slope(1.0, p) == doctest::Approx(-2.0 * std::tanh(1.0) / std::cosh(1.0)));
    CHECK(envelope(5.0, p) == 0.0);
    const double ref = oracle::simpson([](double t) { return 2.0 / std::cosh(t); }, -4.5, 4.5);
    CHECK(pulse_area(p) == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("basis bookkeeping") {
    CHECK(dimension(HamiltonianKind::SingleRotating) == 2);
    CHECK(dimension(HamiltonianKind::TripleRotating) == 3);
    CHECK(dimension(HamiltonianKind::FullRWA) == 9);
    CHECK(basis_labels(HamiltonianKind::TripleRotating) == std::vector<std::string>{"11", "W", "rr"});
    CHECK(basis_labels(HamiltonianKind::FullRWA)[4] == "11");
}
