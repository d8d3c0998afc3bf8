#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "hyperq/dressed.hpp"
#include "hyperq/errors.hpp"

using namespace hyperq;

TEST_SUITE("dressed-analysis") {

TEST_CASE("collective basis is unitary") {
    const Matrix u = collective_basis();
    CHECK((u.adjoint() * u - Matrix::Identity(4, 4)).norm() <= 1e-15);
    CHECK(std::abs(u(2, 1) - 1.0 / std::sqrt(2.0)) <= 1e-16);  // <eg|+>
    CHECK(std::abs(u(1, 2) + 1.0 / std::sqrt(2.0)) <= 1e-16);  // <ge|->
    CHECK(std::string(to_string(Collective::Minus)) == "-");
}

TEST_CASE("lowest manifolds") {
    const auto m1 = manifold_spectrum(1, 10.0);
    REQUIRE(m1.eigenvalues.size() == 3);
    CHECK(m1.eigenvalues[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
    CHECK(m1.eigenvalues[1] == doctest::Approx(0.0));
    CHECK(m1.eigenvalues[2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(m1.labels == std::vector<std::string>{"Psi-", "Psi0", "Psi+"});

    const auto m2 = manifold_spectrum(2, 10.0);
    REQUIRE(m2.eigenvalues.size() == 4);
    CHECK(m2.eigenvalues[0] == doctest::Approx(-std::sqrt(6.0)).epsilon(1e-12));
    CHECK(std::abs(m2.eigenvalues[1]) <= 1e-12);
    CHECK(std::abs(m2.eigenvalues[2]) <= 1e-12);
    CHECK(m2.eigenvalues[3] == doctest::Approx(std::sqrt(6.0)).epsilon(1e-12));
    CHECK(m2.labels.size() == 4);
    CHECK(m2.basis.size() == 4);
}

TEST_CASE("closed-form manifold eigenvalues") {
    for (std::size_t n = 1; n <= 10; ++n) {
        const auto m = manifold_spectrum(n, 10.0);
        const double e = std::sqrt(4.0 * static_cast<double>(n) - 2.0);
        CHECK(std::abs(m.eigenvalues.front() + e) <= 1e-10 * e);
        CHECK(std::abs(m.eigenvalues.back() - e) <= 1e-10 * e);
        for (std::size_t k = 1; k + 1 < m.eigenvalues.size(); ++k) CHECK(std::abs(m.eigenvalues[k]) <= 1e-10 * e);
        const Matrix& v = m.eigenvectors;
        CHECK((v.adjoint() * v - Matrix::Identity(v.cols(), v.cols())).norm() <= 1e-12);
    }
}

TEST_CASE("dark state of the n = 3 manifold") {
    const auto m = manifold_spectrum(3, 10.0);
    // Basis |gg,3>, |-,2>, |ee,1>, |+,2>; the zero state of the coupled block
    // lives on |gg> and |ee> with ratio sqrt(2) : sqrt(3).
    Eigen::Index phi0 = -1;
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(m.labels.size()); ++k)
        if (m.labels[static_cast<std::size_t>(k)] == "Phi0") phi0 = k;
    REQUIRE(phi0 >= 0);
    const Vector v = m.eigenvectors.col(phi0);
    CHECK(std::abs(v(1)) <= 1e-12);
    CHECK(std::abs(v(3)) <= 1e-12);
    CHECK(std::abs(std::abs(v(0) / v(2)) - std::sqrt(2.0 / 3.0)) <= 1e-12);
}

TEST_CASE("manifold argument checks") {
    CHECK_THROWS_AS(manifold_spectrum(0, 10.0), InvalidArgument);
    CHECK_THROWS_AS(manifold_spectrum(2, 0.0), InvalidArgument);
}

TEST_CASE("manifold spectra reproduce the full coupling spectrum") {
    const std::size_t n_max = 8;
    const auto p = ModelParams::out_phase(10.0, 0.5, 0.0, 0.0, n_max);
    Eigen::SelfAdjointEigenSolver<Matrix> es(interaction_hamiltonian(p).matrix(), Eigen::EigenvaluesOnly);
    std::vector<double> full(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::vector<double> expected{0.0};  // |gg,0>
    for (std::size_t n = 1; n <= n_max; ++n)
        for (double e : manifold_spectrum(n, 10.0).eigenvalues) expected.push_back(10.0 * e);
    // Manifolds above n_max are cut by the truncation; the complete ones must all appear.
    for (double e : expected) {
        auto it = std::min_element(full.begin(), full.end(), [e](double x, double y) { return std::abs(x - e) < std::abs(y - e); });
        REQUIRE(it != full.end());
        CHECK(std::abs(*it - e) <= 1e-9);
        full.erase(it);
    }
}

TEST_CASE("interference selection rule") {
    const double g = 10.0;
    CHECK(interference_check(ModelParams::out_phase(g, 0.5, 0.0, 0.5, 4)) <= 1e-14 * g);
    CHECK(std::abs(interference_check(ModelParams::in_phase(g, 0.5, 0.0, 0.5, 4)) - std::sqrt(2.0) * g) <= 1e-12);

    // |+,n-1> is decoupled from every other state of the out-phase coupling.
    const auto p = ModelParams::out_phase(g, 0.5, 0.0, 0.0, 6);
    const Operator h = interaction_hamiltonian(p);
    for (std::size_t n = 0; n <= 6; ++n) {
        const Vector col = h.matrix() * collective_state(Collective::Plus, n, 6);
        CHECK(col.norm() <= 1e-14);
    }
}

TEST_CASE("ladder elements") {
    const double g = 10.0;
    const auto p = ModelParams::out_phase(g, 0.5, 0.0, 0.0, 8);
    const Operator h = interaction_hamiltonian(p);
    for (std::size_t n = 0; n <= 5; ++n) {
        const double up = std::abs(collective_element(h, Collective::Minus, n + 1, Collective::EE, n));
        const double top = std::abs(collective_element(h, Collective::GG, n + 2, Collective::Minus, n + 1));
        CHECK(std::abs(up - std::sqrt(2.0 * (n + 1)) * g) <= 1e-12);
        CHECK(std::abs(top - std::sqrt(2.0 * (n + 2)) * g) <= 1e-12);
    }
}

TEST_CASE("collective lowering operators") {
    const Operator dp = collective_lowering(+1, 2), dm = collective_lowering(-1, 2);
    const Vector plus = collective_state(Collective::Plus, 1, 2);
    const Vector gg = collective_state(Collective::GG, 1, 2);
    CHECK((dp.matrix() * plus - gg).norm() <= 1e-15);
    CHECK((dm.matrix() * plus).norm() <= 1e-15);
    CHECK_THROWS_AS(collective_lowering(0, 2), InvalidArgument);
}

TEST_CASE("pump pathway") {
    const double g = 10.0, eta = 0.5;
    const auto steps = pathway_amplitudes(1, ModelParams::out_phase(g, 0.5, 0.0, eta, 5));
    REQUIRE(steps.size() == 4);
    CHECK(std::abs(std::abs(steps[0].amplitude) - std::sqrt(2.0) * eta) <= 1e-14);
    CHECK(std::abs(std::abs(steps[1].amplitude) - std::sqrt(2.0) * eta) <= 1e-14);
    CHECK(std::abs(std::abs(steps[2].amplitude) - 2.0 * g) <= 1e-12);
    CHECK(std::abs(std::abs(steps[3].amplitude) - std::sqrt(6.0) * g) <= 1e-12);
    CHECK(steps[0].from == "|gg,1>");

    CHECK_THROWS_AS(pathway_amplitudes(1, ModelParams::in_phase(g, 0.5, 0.0, eta, 5)), InvalidArgument);
    CHECK_THROWS_AS(pathway_amplitudes(4, ModelParams::out_phase(g, 0.5, 0.0, eta, 5)), InvalidArgument);
}

TEST_CASE("report") {
    const std::string r = dressed_report(ModelParams::out_phase(10.0, 0.5, 0.0, 0.5, 6), 3);
    CHECK(r.find("Psi+") != std::string::npos);
    CHECK(r.find("|gg,2>") != std::string::npos);
}

}
