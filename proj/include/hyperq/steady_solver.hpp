#pragma once

#include <cstddef>

#include "hyperq/model.hpp"
#include "hyperq/operator_core.hpp"

namespace hyperq {

/// Lindblad generator as a D^2 x D^2 sparse matrix acting on column-stacked
/// density matrices: vec(rho)[i + j*D] = rho(i, j), vec(A rho B) = (B^T kron A) vec(rho).
struct Liouvillian {
    SpaceDescriptor space;
    SparseMatrix superop;

    std::size_t hilbert_dim() const noexcept { return space.total_dim(); }
    /// Column-stacked L vec(rho), reshaped back to a D x D matrix.
    Matrix apply(const Matrix& rho) const;
};

Vector vectorize(const Matrix& rho);
Matrix devectorize(const Vector& v, std::size_t dim);

Liouvillian build_liouvillian(const LindbladModel& m);

struct SolverStats {
    std::size_t superop_dim = 0;
    std::size_t nonzeros = 0;
    std::size_t refinement_steps = 0;
    double factorization_seconds = 0.0;
    double asymmetry_before_hermitization = 0.0;
    double min_eigenvalue = 0.0;
    double trace_error = 0.0;
};

struct SteadyStateReport {
    DensityMatrix rho;
    double residual = 0.0;         ///< max |L vec(rho)|
    double tail_population = 0.0;  ///< sum of P_n for n > n_max - 3
    bool truncation_suspect = false;
    SolverStats stats;
};

inline constexpr double kResidualTol = 1e-10;
inline constexpr double kTailTol = 1e-6;
inline constexpr double kAsymmetryTol = 1e-8;

enum class SteadyMethod {
    /// Real coordinates of Hermitian rho (diagonal, Re and Im of the upper
    /// triangle), factorized with UMFPACK. Default.
    HermitianReal,
    /// Complex column-stacked system factorized with Eigen's SparseLU; slower,
    /// kept as the reference path.
    ComplexReference,
};

/// Trace-one null vector of L by a bordered sparse LU solve (first equation
/// replaced by Tr rho = 1) plus one step of iterative refinement. The result is
/// Hermitized and checked for positivity before it is returned.
///
/// Throws DegenerateSteadyState when L has several independent null vectors
/// and ConvergenceFailure when the residual stays above kResidualTol.
SteadyStateReport steady_state(const Liouvillian& l, SteadyMethod method = SteadyMethod::HermitianReal);

/// Population of Fock levels n > n_max - 3 on the last (cavity) slot.
double cavity_tail_population(const DensityMatrix& rho);

/// Dimension of the null space of L, from a rank-revealing sparse QR.
std::size_t null_space_dimension(const Liouvillian& l);

struct EvolveOptions {
    double tolerance = 1e-12;  ///< per-step error bound (max norm on vec(rho))
    double min_step = 1e-9;
    std::size_t max_consecutive_rejections = 40;
};

struct EvolveStats {
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    double last_step = 0.0;
};

/// Classical RK4 on d vec(rho)/dt = L vec(rho) with step-doubling error control.
/// The trace, Hermiticity and PSD contracts are checked after every accepted
/// step. `dt` is the initial step; it adapts from there.
DensityMatrix time_evolve(const LindbladModel& m, const DensityMatrix& rho0, double t_final, double dt,
                          const EvolveOptions& options = {}, EvolveStats* stats = nullptr);

}  // namespace hyperq
