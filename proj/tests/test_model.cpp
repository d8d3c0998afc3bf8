#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "hyperq/errors.hpp"
#include "hyperq/model.hpp"
#include "hyperq/observables.hpp"
#include "hyperq/steady_solver.hpp"
#include "oracles.hpp"

using namespace hyperq;

namespace {

Eigen::VectorXd sorted_spectrum(const Operator& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix(), Eigen::EigenvaluesOnly);
    return es.eigenvalues();  // ascending
}

// [q1, q2, cavity] index of |q1 q2, n>.
Eigen::Index idx(int q1, int q2, int n, std::size_t n_max) {
    return (q1 * 2 + q2) * static_cast<Eigen::Index>(n_max + 1) + n;
}

}  // namespace

TEST_SUITE("model-builder") {

TEST_CASE("params validation") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    p.kappa = -0.1;
    CHECK_THROWS_AS(build_two_qubit_model(p), InvalidArgument);
    p = ModelParams{};
    p.gamma = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = ModelParams{};
    p.n_max = 0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    const auto out = ModelParams::out_phase(10.0, 0.5, 1.0, 0.5);
    CHECK(out.g1 == -out.g2);
    CHECK(out.is_out_phase());
    CHECK_FALSE(ModelParams::in_phase(10.0, 0.5, 1.0, 0.5).is_out_phase());
}

TEST_CASE("undriven uncoupled Hamiltonian is diagonal") {
    auto p = ModelParams::out_phase(0.0, 0.5, 0.0, 0.0, 5);
    p.delta_a = 1.3;
    p.delta_c = -0.7;
    const Matrix h = build_two_qubit_model(p).hamiltonian.matrix();
    Matrix off = h;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() == 0.0);
    CHECK(h(idx(1, 1, 3, 5), idx(1, 1, 3, 5)).real() == doctest::Approx(2 * 1.3 + 3 * -0.7));
}

TEST_CASE("out-phase coupling matrix elements") {
    const auto p = ModelParams::out_phase(10.0, 0.5, 0.0, 0.5, 4);
    const Matrix h = build_two_qubit_model(p).hamiltonian.matrix();
    CHECK(h(idx(0, 0, 1, 4), idx(1, 0, 0, 4)) == Complex(10.0));   // <gg,1|H|eg,0> = g1
    CHECK(h(idx(0, 0, 1, 4), idx(0, 1, 0, 4)) == Complex(-10.0));  // <gg,1|H|ge,0> = g2
    CHECK(h(idx(1, 0, 0, 4), idx(0, 0, 0, 4)) == Complex(0.5));    // drive
    CHECK(hermiticity_error(h) == 0.0);
}

TEST_CASE("two-qubit model channels") {
    const auto p = ModelParams::out_phase(10.0, 0.5, 0.0, 0.5, 4);
    const auto m = build_two_qubit_model(p);
    REQUIRE(m.collapse_channels.size() == 3);
    CHECK(m.collapse_channels[0].rate == 0.5);
    CHECK(m.collapse_channels[1].rate == 1.0);
    CHECK(m.collapse_channels[2].rate == 1.0);
    // Every channel annihilates |gg,0>.
    Vector ground = Vector::Zero(static_cast<Eigen::Index>(m.space().total_dim()));
    ground(0) = 1.0;
    for (const auto& ch : m.collapse_channels) CHECK((ch.op.matrix() * ground).norm() == 0.0);
}

TEST_CASE("single-qubit model") {
    const auto p = ModelParams::out_phase(10.0, 0.5, 0.3, 0.8, 8);
    const auto m1 = build_single_qubit_model(p, 1);
    const auto m2 = build_single_qubit_model(p, 2);
    CHECK(m1.space().dims() == std::vector<std::size_t>{2, 9});
    CHECK(m1.collapse_channels.size() == 2);
    CHECK(hermiticity_error(m1.hamiltonian.matrix()) == 0.0);
    CHECK_THROWS_AS(build_single_qubit_model(p, 0), InvalidArgument);
    CHECK_THROWS_AS(build_single_qubit_model(p, 3), InvalidArgument);

    // The sign of g is a gauge for one qubit: identical spectra.
    const Eigen::VectorXd e1 = sorted_spectrum(m1.hamiltonian), e2 = sorted_spectrum(m2.hamiltonian);
    CHECK((e1 - e2).cwiseAbs().maxCoeff() <= 1e-10);

    // No pumping: |g,0> is the steady state.
    auto quiet = p;
    quiet.eta = 0.0;
    const auto ss = steady_state(build_liouvillian(build_single_qubit_model(quiet, 1)));
    CHECK(std::abs(ss.rho.matrix()(0, 0) - 1.0) < 1e-12);
}

TEST_CASE("global coupling sign flip leaves the spectrum invariant") {
    auto p = ModelParams::out_phase(10.0, 0.5, 1.7, 0.9, 6);
    const auto e = sorted_spectrum(build_two_qubit_model(p).hamiltonian);
    p.g1 = -p.g1;
    p.g2 = -p.g2;
    const auto f = sorted_spectrum(build_two_qubit_model(p).hamiltonian);
    CHECK((e - f).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("undriven Hamiltonian conserves the excitation number") {
    for (double delta : {0.0, 2.5}) {
        const auto p = ModelParams::out_phase(10.0, 0.5, delta, 0.0, 6);
        const auto h = build_two_qubit_model(p).hamiltonian;
        const TwoQubitCavityOps ops(6);
        const Operator n_exc = ops.a.dagger() * ops.a + ops.sm1.dagger() * ops.sm1 + ops.sm2.dagger() * ops.sm2;
        CHECK((h * n_exc - n_exc * h).matrix().cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("coherent calibration state") {
    const auto vac = build_driven_cavity_model(0.0, 20);
    CHECK(std::abs(vac.matrix()(0, 0) - 1.0) < 1e-15);

    const auto half = build_driven_cavity_model(0.5, 20);
    const Operator a = fock_annihilation(20);
    CHECK(std::abs(expect(a.dagger() * a, half).real() - 0.25) <= 1e-10);

    // P_n against an independently computed Poisson table.
    const auto one = build_driven_cavity_model(1.0, 20);
    const auto pd = photon_distribution(one);
    for (std::size_t n = 0; n <= 20; ++n) CHECK(std::abs(pd.p[n] - oracle::poisson(1.0, n)) <= 1e-9);

    CHECK_THROWS_AS(build_driven_cavity_model(3.0, 10), TruncationTooSmall);
}

TEST_CASE("default truncation follows the pump strength") {
    CHECK(default_n_max(0.5) == 20);
    CHECK(default_n_max(1.5) == 20);
    CHECK(default_n_max(2.65) == 30);
    CHECK(default_n_max(3.0) == 30);
}

}
