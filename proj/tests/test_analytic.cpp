#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rydgate/analytic.hpp"
#include "rydgate/design.hpp"
#include "rydgate/errors.hpp"
#include "rydgate/propagator.hpp"

using namespace rydgate;
using std::numbers::pi;

namespace {

std::array<double, 3> sorted(std::array<double, 3> e) {
    std::sort(e.begin(), e.end());
    return e;
}

Eigen::Vector3d eig3(double omega, double we, double v) {
    SystemParams s = oracle::system(omega, we, v);
    return Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd>(oracle::triple_rotating(0.0, s)).eigenvalues();
}

double alpha_exact(const SystemParams& s) { return phase_of(s, HamiltonianKind::SingleRotating, 0).phase; }
double beta_exact(const SystemParams& s) { return phase_of(s, HamiltonianKind::TripleRotating, 0).phase; }

}  // namespace

TEST_CASE("two-level dressed energies") {
    const auto e0 = dressed_energies_single(0.0, oracle::system(0.0, 10.0));
    CHECK(std::min(e0.plus, e0.minus) == doctest::Approx(-10.0));
    CHECK(std::max(e0.plus, e0.minus) == doctest::Approx(0.0));
    const auto e = dressed_energies_single(0.0, oracle::system(3.0, 4.0));
    CHECK(e.plus - e.minus == doctest::Approx(5.0).epsilon(1e-15));

    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> W(-50, 50), O(0, 50);
    for (int i = 0; i < 200; ++i) {
        const SystemParams s = oracle::system(O(rng), W(rng));
        const Eigen::Vector2d ref = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(oracle::single_rotating(0.0, s)).eigenvalues();
        const auto d = dressed_energies_single(0.0, s);
        CHECK(std::abs(d.minus - ref(0)) <= 1e-12 * std::max(1.0, std::abs(ref(0))));
        CHECK(std::abs(d.plus - ref(1)) <= 1e-12 * std::max(1.0, std::abs(ref(1))));
    }
}

TEST_CASE("alpha_adiabatic") {
    CHECK(alpha_adiabatic(oracle::system(0.0, 10.0)) == 0.0);
    CHECK(alpha_adiabatic(oracle::system(1.0, 20.0)) == doctest::Approx(-0.01567).epsilon(0.01));
    CHECK_THROWS_AS(alpha_adiabatic(oracle::system(1.0, 0.0)), CriticalPointError);
    CHECK_THROWS_AS(alpha_adiabatic(oracle::system(1.0, 10.0, 0.0, 0.1)), ValidationError);
    // tracks E_+ for omega_e > 0: the state that starts at 0 when the drive is off
    const SystemParams s = oracle::system(5.0, 10.0);
    const double ref = -oracle::simpson(
        [&](double t) {
            const double om = oracle::gaussian(t, 5.0);
            return 0.5 * (-10.0 + std::sqrt(100.0 + om * om));
        },
        -4.5, 4.5);
    CHECK(alpha_adiabatic(s) == doctest::Approx(ref).epsilon(1e-10));
    CHECK(alpha_adiabatic(oracle::system(5.0, -10.0)) == doctest::Approx(-ref).epsilon(1e-10));
}

TEST_CASE("alpha_adiabatic matches exact dynamics at the design frequency") {
    const RootResult r = solve_omega0_for_alpha(10.0, -2.0 * pi, {0.0, 100.0});
    const SystemParams s = oracle::system(r.root, 10.0);
    CHECK(std::abs(alpha_adiabatic(s) - alpha_exact(s)) <= 1e-3);
}

TEST_CASE("alpha_ae_limit") {
    CHECK(alpha_ae_limit(oracle::system(1.0, 20.0)) == doctest::Approx(-std::sqrt(pi / 2.0) / 80.0).epsilon(1e-15));
    CHECK(alpha_ae_limit(oracle::system(1.0, 20.0)) == doctest::Approx(-0.015666).epsilon(1e-4));
    CHECK(alpha_ae_limit(oracle::system(2.0, 20.0)) == doctest::Approx(4.0 * alpha_ae_limit(oracle::system(1.0, 20.0))));
    const double we = 13.0;
    const double om_opt = std::pow(128.0 * pi, 0.25) * std::sqrt(we);
    CHECK(alpha_ae_limit(oracle::system(om_opt, we)) == doctest::Approx(-2.0 * pi).epsilon(1e-14));
}

TEST_CASE("three-level energies") {
    const auto z = sorted(cubic_energies(0.0, 10.0, 50.0).energies);
    CHECK(z[0] == doctest::Approx(-10.0));
    CHECK(std::abs(z[1]) < 1e-12);
    CHECK(z[2] == doctest::Approx(30.0));

    // V = 0: two independent atoms, dressed pair sums
    for (double om : {0.5, 3.0, 20.0}) {
        const auto e = sorted(cubic_energies(om, 7.0, 0.0).energies);
        const Eigen::Vector3d ref = eig3(om, 7.0, 0.0);
        for (int i = 0; i < 3; ++i) {
            CHECK(e[i] == doctest::Approx(ref(i)).epsilon(1e-12));
        }
        const double g = std::sqrt(49.0 + om * om);
        CHECK(e[0] == doctest::Approx(-7.0 - g).epsilon(1e-12));
        CHECK(e[2] == doctest::Approx(-7.0 + g).epsilon(1e-12));
    }
}

TEST_CASE("cubic formula equals direct diagonalisation on 1000 random points") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> W(-50, 50), O(0, 50), V(0, 150);
    double worst = 0.0;
    double worst_det = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double om = O(rng), we = W(rng), v = V(rng);
        const DressedSpectrum d = cubic_energies(om, we, v);
        CHECK(d.p > 0.0);
        const auto e = sorted(d.energies);
        const Eigen::Vector3d ref = eig3(om, we, v);
        const double scale = ref.cwiseAbs().maxCoeff();
        const Eigen::Matrix3cd h = oracle::triple_rotating(0.0, oracle::system(om, we, v));
        for (int k = 0; k < 3; ++k) {
            worst = std::max(worst, std::abs(e[k] - ref(k)) / scale);
            const cplx det = (h - e[k] * Eigen::Matrix3cd::Identity()).determinant();
            worst_det = std::max(worst_det, std::abs(det) / std::pow(scale, 3));
        }
        // documented ordering
        CHECK(d.energies[0] >= d.energies[2]);
        CHECK(d.energies[2] >= d.energies[1]);
    }
    CHECK(worst <= 1e-9);
    CHECK(worst_det <= 1e-9);
}

TEST_CASE("branch index") {
    CHECK(branch_index(-5.0, 50.0) == 1);
    CHECK(branch_index(10.0, 50.0) == 2);
    CHECK(branch_index(30.0, 50.0) == 0);
    CHECK_THROWS_AS(branch_index(0.0, 50.0), CriticalPointError);
    CHECK_THROWS_AS(branch_index(25.0, 50.0), CriticalPointError);
    // with the drive off the selected branch is the bare |11> energy
    for (auto [we, v] : {std::pair{-5.0, 50.0}, std::pair{10.0, 50.0}, std::pair{30.0, 50.0}, std::pair{3.0, 0.0}}) {
        const DressedSpectrum d = cubic_energies(0.0, we, v);
        CHECK(std::abs(d.energies[branch_index(we, v)]) < 1e-12);
    }
}

TEST_CASE("beta_adiabatic") {
    CHECK(beta_adiabatic(oracle::system(0.0, 10.0, 50.0)) == 0.0);
    for (double we : {-8.0, 5.0, 12.0}) {
        const SystemParams s = oracle::system(6.0, we, 0.0);
        CHECK(std::abs(beta_adiabatic(s) - 2.0 * alpha_adiabatic(s)) <= 1e-8);
    }
    const SystemParams d = oracle::system(16.29, 10.0, 53.59);
    CHECK(std::abs(beta_adiabatic(d) + 3.0 * pi) <= 2e-2);
    CHECK(std::abs(beta_adiabatic(d) - beta_exact(d)) <= 2e-2);
    CHECK_THROWS_AS(beta_adiabatic(oracle::system(1.0, 25.0, 50.0)), CriticalPointError);
}

TEST_CASE("beta adiabatic elimination") {
    CHECK(beta_ae_limit(oracle::system(0.0, 10.0, 50.0)) == 0.0);
    CHECK(std::abs(beta_ae_limit(oracle::system(1e-6, 10.0, 50.0))) < 1e-12);
    for (auto [om, we, v] : {std::tuple{2.0, 10.0, 50.0}, std::tuple{4.0, -7.0, 30.0}, std::tuple{1.0, 30.0, 20.0}}) {
        const SystemParams s = oracle::system(om, we, v);
        const double extra = std::sqrt(pi) / 8.0 * std::pow(om, 4) / (we * we * (v - 2.0 * we));
        CHECK(beta_ae_expanded(s) - 2.0 * alpha_ae_limit(s) == doctest::Approx(extra).epsilon(1e-12));
    }
    const SystemParams deep = oracle::system(4.0, 40.0, 120.0);
    CHECK(beta_ae_limit(deep) == doctest::Approx(beta_adiabatic(deep)).epsilon(0.01));
    CHECK_THROWS_AS(beta_ae_limit(oracle::system(1.0, 25.0, 50.0)), CriticalPointError);
}

TEST_CASE("two-photon resonance") {
    const ResonantAmplitudes off = resonant_case(oracle::system(0.0, 25.0, 50.0));
    CHECK(std::abs(off.a11 - cplx(1.0)) < 1e-14);
    CHECK(off.beta == 0.0);

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> W(0.1, 40), O(0, 40);
    for (int i = 0; i < 100; ++i) {
        const double we = W(rng);
        const ResonantAmplitudes r = resonant_case(oracle::system(O(rng), we, 2.0 * we));
        CHECK(std::norm(r.a11) + std::norm(r.arr) == doctest::Approx(1.0).epsilon(1e-15));
    }

    const SystemParams s = oracle::system(5.0, 25.0, 50.0);
    const ResonantAmplitudes r = resonant_case(s);
    const StateVector out = propagate(s, StateVector::basis_state(HamiltonianKind::TripleRotating, 0));
    CHECK(std::abs(std::norm(out.amplitudes[0]) - std::norm(r.a11)) <= 1e-3);
    CHECK(std::abs(std::norm(out.amplitudes[2]) - std::norm(r.arr)) <= 1e-3);
    CHECK_THROWS_AS(resonant_case(oracle::system(5.0, 25.0, 49.0)), ValidationError);
}

TEST_CASE("Rabi case phase") {
    const double unit = pulse_area(oracle::system(1.0, 0.0).pulse);
    const auto at_area = [&](double S) { return oracle::system(S / unit, 0.0); };
    CHECK(rabi_case_alpha(at_area(pi / 2)) == 0.0);
    CHECK(rabi_case_alpha(at_area(3 * pi / 2)) == pi);
    CHECK(rabi_case_alpha(at_area(2 * pi)) == pi);
    CHECK_THROWS_AS(rabi_case_alpha(at_area(pi)), DomainError);
    CHECK_THROWS_AS(rabi_case_alpha(oracle::system(1.0, 1.0)), ValidationError);
    // the exact single-atom amplitude at omega_e = 0 is real with sign cos(S/2)
    for (double S : {pi / 2, 3 * pi / 2, 2 * pi, 2.7 * pi}) {
        const StateVector out = propagate(at_area(S), StateVector::basis_state(HamiltonianKind::SingleRotating, 0));
        const double phase = std::arg(out.amplitudes[0]);
        CHECK(std::abs(std::remainder(phase - rabi_case_alpha(at_area(S)), 2 * pi)) < 1e-6);
    }
}

TEST_CASE("second-order effective phase") {
    for (auto [om, we] : {std::pair{1.0, 20.0}, std::pair{3.0, -9.0}, std::pair{7.0, 50.0}}) {
        const SystemParams s = oracle::system(om, we);
        CHECK(magnus_effective_phase(s) == doctest::Approx(alpha_ae_limit(s)).epsilon(1e-10));
    }
    CHECK(magnus_effective_phase(oracle::system(1.0, 20.0)) == doctest::Approx(-0.015666).epsilon(1e-4));
    CHECK(magnus_effective_phase(oracle::system(1.0, -20.0)) == doctest::Approx(-magnus_effective_phase(oracle::system(1.0, 20.0))));
    CHECK_THROWS(magnus_effective_phase(oracle::system(1.0, 0.0)));
}

TEST_CASE("three-level adiabaticity margin matches eigenvector coupling") {
    // |<k| dH/dOmega |l>| |dOmega/dt| / (E_l - E_k)^2 with eigenvectors from a dense solver
    for (auto [om0, we, v] : {std::tuple{16.0, 10.0, 50.0}, std::tuple{8.0, -6.0, 40.0}, std::tuple{5.0, 30.0, 50.0}}) {
        const SystemParams s = oracle::system(om0, we, v);
        const int n = 2001;
        for (auto [k, l] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
            double ref = 0.0;
            for (int i = 0; i < n; ++i) {
                const double t = -4.5 + 9.0 * i / (n - 1);
                const double om = oracle::gaussian(t, om0);
                const double dom = -2.0 * t * om;
                Eigen::Matrix3d h = oracle::triple_rotating(t, s).real();
                Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h);
                Eigen::Matrix3d dh;
                const double c = 1.0 / std::sqrt(2.0);
                dh << 0, c, 0, c, 0, c, 0, c, 0;
                // solver order is ascending; library order is largest, smallest, middle
                const int map[3] = {2, 0, 1};
                const Eigen::Vector3d vk = es.eigenvectors().col(map[k]);
                const Eigen::Vector3d vl = es.eigenvectors().col(map[l]);
                const double gap = es.eigenvalues()(map[l]) - es.eigenvalues()(map[k]);
                ref = std::max(ref, std::abs(vk.dot(dh * vl) * dom) / (gap * gap));
            }
            const TripleMargin m = adiabaticity_margin_triple(s, k, l, n);
            CHECK(m.margin == doctest::Approx(ref).epsilon(1e-6));
        }
    }
}

TEST_CASE("three-level adiabaticity margin examples") {
    CHECK(adiabaticity_margin_triple(oracle::system(1e-3, 10.0, 50.0), 2, 0).margin < 1e-4);
    const double interior = adiabaticity_margin_branch(oracle::system(16.0, 10.0, 50.0));
    CHECK(interior < 0.1);
    const double near = adiabaticity_margin_branch(oracle::system(16.0, 24.9, 50.0));
    CHECK(near > 100.0 * interior);
    CHECK(std::isinf(adiabaticity_margin_branch(oracle::system(16.0, 25.0, 50.0))));
}

TEST_CASE("adiabatic phases track exact dynamics wherever both margins are small") {
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> W(-50, 50), O(0, 50);
    int accepted = 0;
    double worst_alpha = 0.0;
    double worst_beta = 0.0;
    while (accepted < 10) {
        const SystemParams s = oracle::system(O(rng), W(rng), 50.0);
        if (adiabaticity_margin_single(s) >= 1e-2 || adiabaticity_margin_branch(s) >= 1e-2) continue;
        ++accepted;
        worst_alpha = std::max(worst_alpha, std::abs(alpha_adiabatic(s) - alpha_exact(s)));
        worst_beta = std::max(worst_beta, std::abs(beta_adiabatic(s) - beta_exact(s)));
    }
    CHECK(worst_alpha <= 1e-3);
    CHECK(worst_beta <= 1e-2);
}

TEST_CASE("adiabatic elimination limit converges monotonically") {
    double previous = INFINITY;
    for (double ratio : {5.0, 10.0, 20.0, 40.0}) {
        const SystemParams s = oracle::system(4.0, 4.0 * ratio, 12.0 * ratio);
        const double a = alpha_adiabatic(s);
        const double dev = std::abs(alpha_ae_limit(s) - a) / std::abs(a);
        CHECK(dev < previous);
        previous = dev;
    }
    CHECK(previous < 0.01);
}
