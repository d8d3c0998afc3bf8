#include "hyperq/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hyperq/errors.hpp"

namespace hyperq {

namespace {

void require_same_space(const SpaceDescriptor& a, const SpaceDescriptor& b, const char* where) {
    if (!(a == b)) throw InvalidArgument(std::string(where) + ": space mismatch");
}

}  // namespace

SpaceDescriptor::SpaceDescriptor(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw InvalidArgument("SpaceDescriptor: no subsystems");
    for (auto d : dims_) {
        if (d < 1) throw InvalidArgument("SpaceDescriptor: subsystem dimension must be >= 1");
        total_ *= d;
    }
}

SpaceDescriptor SpaceDescriptor::two_qubit_cavity(std::size_t n_max) { return {2, 2, n_max + 1}; }
SpaceDescriptor SpaceDescriptor::qubit_cavity(std::size_t n_max) { return {2, n_max + 1}; }
SpaceDescriptor SpaceDescriptor::cavity(std::size_t n_max) { return {n_max + 1}; }

std::size_t SpaceDescriptor::dim(std::size_t slot) const {
    if (slot >= dims_.size()) throw InvalidArgument("SpaceDescriptor: slot out of range");
    return dims_[slot];
}

// ---------------------------------------------------------------------------

Operator::Operator(SpaceDescriptor space, Matrix data) : space_(std::move(space)), data_(std::move(data)) {
    const auto n = static_cast<Eigen::Index>(space_.total_dim());
    if (data_.rows() != n || data_.cols() != n)
        throw InvalidArgument("Operator: matrix shape does not match space dimension");
}

Operator Operator::identity(const SpaceDescriptor& space) {
    const auto n = static_cast<Eigen::Index>(space.total_dim());
    return {space, Matrix::Identity(n, n)};
}

Operator Operator::zero(const SpaceDescriptor& space) {
    const auto n = static_cast<Eigen::Index>(space.total_dim());
    return {space, Matrix::Zero(n, n)};
}

SparseMatrix Operator::sparse() const { return data_.sparseView(Complex(0.0), 0.0); }

Operator Operator::dagger() const { return {space_, data_.adjoint()}; }

bool Operator::is_hermitian(double tol) const { return hermiticity_error(data_) <= tol; }

Operator Operator::operator+(const Operator& rhs) const {
    require_same_space(space_, rhs.space_, "Operator::operator+");
    return {space_, data_ + rhs.data_};
}

Operator Operator::operator-(const Operator& rhs) const {
    require_same_space(space_, rhs.space_, "Operator::operator-");
    return {space_, data_ - rhs.data_};
}

Operator Operator::operator*(const Operator& rhs) const {
    require_same_space(space_, rhs.space_, "Operator::operator*");
    return {space_, data_ * rhs.data_};
}

Operator Operator::operator*(Complex scale) const { return {space_, data_ * scale}; }

Operator& Operator::operator+=(const Operator& rhs) {
    require_same_space(space_, rhs.space_, "Operator::operator+=");
    data_ += rhs.data_;
    return *this;
}

// ---------------------------------------------------------------------------

double hermiticity_error(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_hermitian_eigenvalue(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

DensityMatrix::DensityMatrix(SpaceDescriptor space, Matrix data)
    : space_(std::move(space)), data_(std::move(data)) {
    const auto n = static_cast<Eigen::Index>(space_.total_dim());
    if (data_.rows() != n || data_.cols() != n)
        throw InvalidArgument("DensityMatrix: matrix shape does not match space dimension");
    if (hermiticity_error() > kHermitianTol)
        throw InvalidArgument("DensityMatrix: not Hermitian (error " + std::to_string(hermiticity_error()) + ")");
    if (trace_error() > kTraceTol)
        throw InvalidArgument("DensityMatrix: trace differs from 1 by " + std::to_string(trace_error()));
    if (min_eigenvalue() < -kPsdTol)
        throw InvalidArgument("DensityMatrix: negative eigenvalue " + std::to_string(min_eigenvalue()));
}

DensityMatrix DensityMatrix::pure(const SpaceDescriptor& space, const Vector& psi) {
    if (psi.size() != static_cast<Eigen::Index>(space.total_dim()))
        throw InvalidArgument("DensityMatrix::pure: vector length does not match space");
    const double norm = psi.norm();
    if (norm == 0.0) throw InvalidArgument("DensityMatrix::pure: zero vector");
    const Vector v = psi / norm;
    Matrix rho = v * v.adjoint();
    // Exact Hermitian symmetry; the outer product can differ in the last ulp.
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return {space, std::move(rho)};
}

DensityMatrix DensityMatrix::basis_state(const SpaceDescriptor& space, std::size_t index) {
    if (index >= space.total_dim()) throw InvalidArgument("DensityMatrix::basis_state: index out of range");
    const auto n = static_cast<Eigen::Index>(space.total_dim());
    Matrix rho = Matrix::Zero(n, n);
    rho(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
    return {space, std::move(rho)};
}

double DensityMatrix::hermiticity_error() const { return hyperq::hermiticity_error(data_); }

double DensityMatrix::trace_error() const { return std::abs(data_.trace() - Complex(1.0)); }

double DensityMatrix::min_eigenvalue() const {
    // Hermitian part only; the anti-Hermitian remainder is bounded separately.
    return min_hermitian_eigenvalue(0.5 * (data_ + data_.adjoint()));
}

// ---------------------------------------------------------------------------

Operator fock_annihilation(std::size_t n_max) {
    if (n_max < 1) throw InvalidArgument("fock_annihilation: n_max must be >= 1");
    const auto n = static_cast<Eigen::Index>(n_max + 1);
    Matrix a = Matrix::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return {SpaceDescriptor::cavity(n_max), std::move(a)};
}

Operator qubit_lowering() {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 1) = 1.0;
    return {SpaceDescriptor{2}, std::move(s)};
}

Operator tensor(std::span<const Operator> ops) {
    if (ops.empty()) throw InvalidArgument("tensor: empty operator list");
    std::vector<std::size_t> dims;
    Matrix acc = Matrix::Ones(1, 1);
    for (const auto& op : ops) {
        const auto& d = op.space().dims();
        dims.insert(dims.end(), d.begin(), d.end());
        const Matrix& b = op.matrix();
        Matrix next(acc.rows() * b.rows(), acc.cols() * b.cols());
        for (Eigen::Index i = 0; i < acc.rows(); ++i)
            for (Eigen::Index j = 0; j < acc.cols(); ++j)
                next.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = acc(i, j) * b;
        acc = std::move(next);
    }
    return {SpaceDescriptor(std::move(dims)), std::move(acc)};
}

Operator tensor(std::initializer_list<Operator> ops) {
    return tensor(std::span<const Operator>(ops.begin(), ops.size()));
}

Operator embed(const Operator& op, std::size_t slot, const SpaceDescriptor& space) {
    if (slot >= space.slots()) throw InvalidArgument("embed: slot out of range");
    if (op.dim() != space.dim(slot)) throw InvalidArgument("embed: operator dimension does not match slot");
    std::vector<Operator> factors;
    factors.reserve(space.slots());
    for (std::size_t s = 0; s < space.slots(); ++s) {
        if (s == slot)
            factors.emplace_back(SpaceDescriptor{space.dim(s)}, op.matrix());
        else
            factors.push_back(Operator::identity(SpaceDescriptor{space.dim(s)}));
    }
    return {space, tensor(factors).matrix()};
}

Complex expect(const Operator& op, const DensityMatrix& rho) {
    require_same_space(op.space(), rho.space(), "expect");
    // Tr(A rho) without forming the product.
    return (op.matrix().transpose().cwiseProduct(rho.matrix())).sum();
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<std::size_t> keep) {
    if (keep.empty()) throw InvalidArgument("partial_trace: empty keep set");
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    const auto& dims = rho.space().dims();
    if (keep.back() >= dims.size()) throw InvalidArgument("partial_trace: slot out of range");
    if (keep.size() == dims.size()) return rho;

    std::vector<bool> kept(dims.size(), false);
    for (auto s : keep) kept[s] = true;

    std::vector<std::size_t> kept_dims, traced_dims;
    for (std::size_t s = 0; s < dims.size(); ++s) (kept[s] ? kept_dims : traced_dims).push_back(dims[s]);
    const std::size_t kept_total =
        std::accumulate(kept_dims.begin(), kept_dims.end(), std::size_t{1}, std::multiplies<>());

    // Split every full index into (kept index, traced index).
    const std::size_t total = rho.dim();
    std::vector<std::size_t> kept_index(total), traced_index(total);
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t rem = i, k = 0, t = 0, k_stride = 1, t_stride = 1;
        for (std::size_t s = dims.size(); s-- > 0;) {
            const std::size_t digit = rem % dims[s];
            rem /= dims[s];
            if (kept[s]) {
                k += digit * k_stride;
                k_stride *= dims[s];
            } else {
                t += digit * t_stride;
                t_stride *= dims[s];
            }
        }
        kept_index[i] = k;
        traced_index[i] = t;
    }

    const auto kt = static_cast<Eigen::Index>(kept_total);
    Matrix reduced = Matrix::Zero(kt, kt);
    const Matrix& m = rho.matrix();
    for (std::size_t j = 0; j < total; ++j)
        for (std::size_t i = 0; i < total; ++i)
            if (traced_index[i] == traced_index[j])
                reduced(static_cast<Eigen::Index>(kept_index[i]), static_cast<Eigen::Index>(kept_index[j])) +=
                    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    reduced = 0.5 * (reduced + reduced.adjoint()).eval();
    return {SpaceDescriptor(std::move(kept_dims)), std::move(reduced)};
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    require_same_space(a.space(), b.space(), "trace_distance");
    const Matrix diff = a.matrix() - b.matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace hyperq
