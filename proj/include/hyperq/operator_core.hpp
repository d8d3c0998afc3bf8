#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace hyperq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Ordered subsystem dimensions of a composite Hilbert space.
///
/// Basis index of a composite state is lexicographic with the first slot most
/// significant, so for dims [2, 2, N+1] the index of |q1, q2, n> is
/// (q1 * 2 + q2) * (N+1) + n. Qubits use (g = 0, e = 1); Fock states ascend.
class SpaceDescriptor {
  public:
    explicit SpaceDescriptor(std::vector<std::size_t> dims);
    SpaceDescriptor(std::initializer_list<std::size_t> dims)
        : SpaceDescriptor(std::vector<std::size_t>(dims)) {}

    /// [2, 2, n_max + 1]: qubit 1, qubit 2, cavity.
    static SpaceDescriptor two_qubit_cavity(std::size_t n_max);
    /// [2, n_max + 1]: one qubit and the cavity.
    static SpaceDescriptor qubit_cavity(std::size_t n_max);
    /// [n_max + 1]
    static SpaceDescriptor cavity(std::size_t n_max);

    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t slots() const noexcept { return dims_.size(); }
    std::size_t dim(std::size_t slot) const;
    std::size_t total_dim() const noexcept { return total_; }

    /// Fock truncation of the last slot, which holds the cavity by convention.
    std::size_t cavity_n_max() const noexcept { return dims_.back() - 1; }

    bool operator==(const SpaceDescriptor& other) const noexcept { return dims_ == other.dims_; }

  private:
    std::vector<std::size_t> dims_;
    std::size_t total_ = 1;
};

/// Square complex matrix acting on a SpaceDescriptor. Dense storage is the
/// reference representation; sparse() gives an exact copy for solvers.
class Operator {
  public:
    Operator(SpaceDescriptor space, Matrix data);

    static Operator identity(const SpaceDescriptor& space);
    static Operator zero(const SpaceDescriptor& space);

    const SpaceDescriptor& space() const noexcept { return space_; }
    const Matrix& matrix() const noexcept { return data_; }
    std::size_t dim() const noexcept { return space_.total_dim(); }
    Complex operator()(std::size_t row, std::size_t col) const { return data_(row, col); }

    SparseMatrix sparse() const;
    Operator dagger() const;
    bool is_hermitian(double tol) const;

    Operator operator+(const Operator& rhs) const;
    Operator operator-(const Operator& rhs) const;
    Operator operator*(const Operator& rhs) const;
    Operator operator*(Complex scale) const;
    Operator& operator+=(const Operator& rhs);

  private:
    SpaceDescriptor space_;
    Matrix data_;
};

inline Operator operator*(Complex scale, const Operator& op) { return op * scale; }

/// Hermitian, unit-trace, positive semidefinite state. The constructor checks
/// the three contracts at the tolerances below and throws InvalidArgument.
class DensityMatrix {
  public:
    static constexpr double kHermitianTol = 1e-10;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kPsdTol = 1e-8;

    DensityMatrix(SpaceDescriptor space, Matrix data);

    /// |psi><psi| after normalizing psi.
    static DensityMatrix pure(const SpaceDescriptor& space, const Vector& psi);
    /// Basis projector |index><index|.
    static DensityMatrix basis_state(const SpaceDescriptor& space, std::size_t index);

    const SpaceDescriptor& space() const noexcept { return space_; }
    const Matrix& matrix() const noexcept { return data_; }
    std::size_t dim() const noexcept { return space_.total_dim(); }

    double hermiticity_error() const;
    double trace_error() const;
    double min_eigenvalue() const;

  private:
    SpaceDescriptor space_;
    Matrix data_;
};

double hermiticity_error(const Matrix& m);
double min_hermitian_eigenvalue(const Matrix& m);

/// Truncated bosonic lowering operator, <n-1|a|n> = sqrt(n).
Operator fock_annihilation(std::size_t n_max);
/// |g><e| in the (g, e) basis.
Operator qubit_lowering();

/// Kronecker product in list order.
Operator tensor(std::span<const Operator> ops);
Operator tensor(std::initializer_list<Operator> ops);

/// op on `slot`, identity on every other slot.
Operator embed(const Operator& op, std::size_t slot, const SpaceDescriptor& space);

Complex expect(const Operator& op, const DensityMatrix& rho);

/// Reduced state on the kept slots (ascending slot order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<std::size_t> keep);

/// 0.5 * trace norm of the difference.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace hyperq
