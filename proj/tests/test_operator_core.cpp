#include "doctest.h"

#include <cmath>
#include <random>

#include "hyperq/errors.hpp"
#include "hyperq/operator_core.hpp"
#include "oracles.hpp"

using namespace hyperq;

namespace {

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

Operator random_operator(std::mt19937& rng, std::size_t d) {
    std::normal_distribution<double> normal;
    Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(normal(rng), normal(rng));
    return {SpaceDescriptor{d}, m};
}

}  // namespace

TEST_SUITE("operator-core") {

TEST_CASE("space descriptor invariants") {
    const auto s = SpaceDescriptor::two_qubit_cavity(20);
    CHECK(s.dims() == std::vector<std::size_t>{2, 2, 21});
    CHECK(s.total_dim() == 84);
    CHECK(s.cavity_n_max() == 20);
    CHECK_THROWS_AS(SpaceDescriptor({2, 0}), InvalidArgument);
    CHECK_THROWS_AS(SpaceDescriptor(std::vector<std::size_t>{}), InvalidArgument);
    CHECK_FALSE(SpaceDescriptor({2, 3}) == SpaceDescriptor({3, 2}));
}

TEST_CASE("fock annihilation") {
    const Operator a = fock_annihilation(2);
    CHECK(a.dim() == 3);
    CHECK(a(0, 1) == Complex(1.0));
    CHECK(std::abs(a(1, 2) - std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(a(1, 2).real() - 1.41421356) < 1e-8);
    const Matrix number = (a.dagger() * a).matrix();
    Matrix expected = Matrix::Zero(3, 3);
    expected.diagonal() << 0.0, 1.0, 2.0;
    CHECK(max_diff(number, expected) < 1e-15);
    CHECK_THROWS_AS(fock_annihilation(0), InvalidArgument);
}

TEST_CASE("qubit lowering") {
    const Operator sm = qubit_lowering();
    Vector e(2), g(2);
    e << 0.0, 1.0;
    g << 1.0, 0.0;
    CHECK(max_diff(sm.matrix() * e, g) == 0.0);
    CHECK((sm.matrix() * g).norm() == 0.0);
    Matrix proj = Matrix::Zero(2, 2);
    proj(1, 1) = 1.0;
    CHECK(max_diff((sm.dagger() * sm).matrix(), proj) == 0.0);
}

TEST_CASE("tensor and embed") {
    const Operator i2 = Operator::identity(SpaceDescriptor{2});
    CHECK(max_diff(tensor({i2, i2}).matrix(), Matrix::Identity(4, 4)) == 0.0);
    CHECK_THROWS_AS(tensor(std::span<const Operator>{}), InvalidArgument);

    const Operator sm = qubit_lowering();
    const Operator s1 = tensor({sm, i2});
    for (Eigen::Index j = 0; j < 2; ++j) CHECK(s1.matrix()(0 * 2 + j, 1 * 2 + j) == Complex(1.0));
    CHECK(s1.matrix().cwiseAbs().sum() == doctest::Approx(2.0));

    std::mt19937 rng(7);
    const Operator b3 = random_operator(rng, 3);
    CHECK(tensor({random_operator(rng, 2), b3}).dim() == 6);
    CHECK(tensor({random_operator(rng, 2), b3}).space().dims() == std::vector<std::size_t>{2, 3});

    const SpaceDescriptor space{2, 2, 3};
    const Operator i3 = Operator::identity(SpaceDescriptor{3});
    CHECK(max_diff(embed(sm, 0, space).matrix(), tensor({sm, i2, i3}).matrix()) == 0.0);
    const Operator a_full = embed(fock_annihilation(2), 2, space);
    const Operator s_full = embed(sm, 0, space);
    CHECK(max_diff((a_full * s_full - s_full * a_full).matrix(), Matrix::Zero(12, 12)) == 0.0);
    for (std::size_t slot = 0; slot < 3; ++slot)
        CHECK(max_diff(embed(Operator::identity(SpaceDescriptor{space.dim(slot)}), slot, space).matrix(),
                       Matrix::Identity(12, 12)) == 0.0);
    CHECK_THROWS_AS(embed(sm, 2, space), InvalidArgument);
    CHECK_THROWS_AS(embed(sm, 3, space), InvalidArgument);
}

TEST_CASE("tensor associativity and dagger properties on random operators") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const Operator a = random_operator(rng, 2), b = random_operator(rng, 3), c = random_operator(rng, 2);
        const Operator left = tensor({a, tensor({b, c})});
        const Operator right = tensor({tensor({a, b}), c});
        CHECK(max_diff(left.matrix(), right.matrix()) <= 1e-14);

        const Operator x = random_operator(rng, 4), y = random_operator(rng, 4);
        CHECK(max_diff((x * y).dagger().matrix(), (y.dagger() * x.dagger()).matrix()) <= 1e-14);
        CHECK(max_diff(x.dagger().dagger().matrix(), x.matrix()) == 0.0);
    }
}

TEST_CASE("truncated ladder commutator") {
    const std::size_t n_max = 6;
    const Operator a = fock_annihilation(n_max);
    const Matrix comm = (a * a.dagger() - a.dagger() * a).matrix();
    Matrix expected = Matrix::Identity(7, 7);
    expected(6, 6) = -static_cast<double>(n_max);
    CHECK(max_diff(comm, expected) < 1e-14);
}

TEST_CASE("sparse view matches dense") {
    std::mt19937 rng(3);
    const Operator a = random_operator(rng, 5);
    CHECK(max_diff(Matrix(a.sparse()), a.matrix()) <= 1e-12);
}

TEST_CASE("expectation values") {
    const SpaceDescriptor cav = SpaceDescriptor::cavity(4);
    const Operator a = fock_annihilation(4);
    const Operator num = a.dagger() * a;
    CHECK(expect(num, DensityMatrix::basis_state(cav, 0)) == Complex(0.0));
    CHECK(std::abs(expect(num, DensityMatrix::basis_state(cav, 2)) - 2.0) < 1e-15);

    // Oracle: coherent vector from the factorial series.
    const auto big = SpaceDescriptor::cavity(20);
    const auto rho = DensityMatrix::pure(big, oracle::coherent(0.3, 20));
    const Complex mean = expect(fock_annihilation(20), rho);
    CHECK(std::abs(mean - 0.3) < 1e-8);
    CHECK(std::abs(expect(fock_annihilation(20).dagger() * fock_annihilation(20), rho).imag()) <= 1e-10);

    CHECK_THROWS_AS(expect(fock_annihilation(3), rho), InvalidArgument);
}

TEST_CASE("density matrix contracts") {
    const SpaceDescriptor s{2};
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 0.5;
    m(1, 1) = 0.5;
    CHECK_NOTHROW(DensityMatrix(s, m));
    Matrix bad_trace = m * 2.0;
    CHECK_THROWS_AS(DensityMatrix(s, bad_trace), InvalidArgument);
    Matrix non_herm = m;
    non_herm(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix(s, non_herm), InvalidArgument);
    Matrix negative = Matrix::Zero(2, 2);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix(s, negative), InvalidArgument);
}

TEST_CASE("partial trace") {
    std::mt19937 rng(5);
    const Matrix ra = oracle::random_density(rng, 2);
    const Matrix rb = oracle::random_density(rng, 3);
    const DensityMatrix a({2}, ra), b({3}, rb);
    const DensityMatrix ab({2, 3}, tensor({Operator({2}, ra), Operator({3}, rb)}).matrix());
    CHECK(max_diff(partial_trace(ab, {0}).matrix(), ra) < 1e-14);
    CHECK(max_diff(partial_trace(ab, {1}).matrix(), rb) < 1e-14);
    CHECK(max_diff(partial_trace(ab, {0, 1}).matrix(), ab.matrix()) == 0.0);
    CHECK_THROWS_AS(partial_trace(ab, {}), InvalidArgument);
    CHECK_THROWS_AS(partial_trace(ab, {2}), InvalidArgument);

    // |gg><gg| (x) |1><1| -> |1><1|
    const auto space = SpaceDescriptor::two_qubit_cavity(3);
    const auto gg1 = DensityMatrix::basis_state(space, 1);
    const auto reduced = partial_trace(gg1, {2});
    CHECK(std::abs(reduced.matrix()(1, 1) - 1.0) < 1e-15);
    CHECK(reduced.matrix().cwiseAbs().sum() == doctest::Approx(1.0));

    // Property: trace preserved for random states and every keep set.
    for (int trial = 0; trial < 10; ++trial) {
        const DensityMatrix rho(space, oracle::random_density(rng, 16));
        for (std::vector<std::size_t> keep : {std::vector<std::size_t>{0}, {1}, {2}, {0, 2}, {1, 2}, {0, 1}}) {
            const auto r = partial_trace(rho, keep);
            CHECK(std::abs(r.matrix().trace() - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("trace distance") {
    const auto s = SpaceDescriptor::cavity(2);
    CHECK(trace_distance(DensityMatrix::basis_state(s, 0), DensityMatrix::basis_state(s, 1)) == doctest::Approx(1.0));
    CHECK(trace_distance(DensityMatrix::basis_state(s, 2), DensityMatrix::basis_state(s, 2)) == doctest::Approx(0.0));
}

}
