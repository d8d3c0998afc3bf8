#include "hyperq/steady_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include <Eigen/SparseLU>
#include <Eigen/SparseQR>
#include <Eigen/UmfPackSupport>
#include <unsupported/Eigen/KroneckerProduct>

#include "hyperq/errors.hpp"

namespace hyperq {

namespace {

using Index = Eigen::Index;

SparseMatrix sparse_identity(std::size_t n) {
    SparseMatrix id(static_cast<Index>(n), static_cast<Index>(n));
    id.setIdentity();
    return id;
}

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// A failed solve is either a degenerate generator or a genuine numerical failure.
[[noreturn]] void fail_solve(const Liouvillian& l, const std::string& reason) {
    const std::size_t null_dim = null_space_dimension(l);
    if (null_dim > 1)
        throw DegenerateSteadyState(null_dim,
                                    "steady_state: Liouvillian null space has dimension " + std::to_string(null_dim));
    throw ConvergenceFailure(reason);
}

}  // namespace

Vector vectorize(const Matrix& rho) {
    return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix devectorize(const Vector& v, std::size_t dim) {
    const auto d = static_cast<Index>(dim);
    if (v.size() != d * d) throw InvalidArgument("devectorize: length is not dim^2");
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

Matrix Liouvillian::apply(const Matrix& rho) const {
    return devectorize(superop * vectorize(rho), hilbert_dim());
}

Liouvillian build_liouvillian(const LindbladModel& m) {
    const auto& space = m.space();
    const std::size_t d = space.total_dim();
    const SparseMatrix id = sparse_identity(d);
    const SparseMatrix h = m.hamiltonian.sparse();
    const SparseMatrix ht = h.transpose();

    SparseMatrix l = Complex(0.0, -1.0) * (SparseMatrix(Eigen::kroneckerProduct(id, h)) -
                                           SparseMatrix(Eigen::kroneckerProduct(ht, id)));
    for (const auto& ch : m.collapse_channels) {
        if (!(ch.op.space() == space)) throw InvalidArgument("build_liouvillian: collapse operator on wrong space");
        if (!(ch.rate >= 0.0)) throw InvalidArgument("build_liouvillian: negative collapse rate");
        if (ch.rate == 0.0) continue;
        const SparseMatrix c = ch.op.sparse();
        const SparseMatrix cdc = SparseMatrix(c.adjoint()) * c;
        const SparseMatrix cdct = cdc.transpose();
        const SparseMatrix cconj = c.conjugate();
        SparseMatrix term = 2.0 * SparseMatrix(Eigen::kroneckerProduct(cconj, c)) -
                            SparseMatrix(Eigen::kroneckerProduct(id, cdc)) -
                            SparseMatrix(Eigen::kroneckerProduct(cdct, id));
        l += ch.rate * term;
    }
    l.prune(Complex(0.0), 0.0);
    l.makeCompressed();
    return {space, std::move(l)};
}

std::size_t null_space_dimension(const Liouvillian& l) {
    Eigen::SparseQR<SparseMatrix, Eigen::COLAMDOrdering<int>> qr;
    qr.compute(l.superop);
    if (qr.info() != Eigen::Success) return 0;
    return static_cast<std::size_t>(l.superop.cols() - qr.rank());
}

double cavity_tail_population(const DensityMatrix& rho) {
    const std::size_t levels = rho.space().dims().back();
    const std::size_t n_max = levels - 1;
    double tail = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        const std::size_t n = i % levels;
        if (n + 3 > n_max) tail += rho.matrix()(static_cast<Index>(i), static_cast<Index>(i)).real();
    }
    return tail;
}

namespace {

using RealSparse = Eigen::SparseMatrix<double>;

// Real coordinates of a Hermitian matrix, laid out on the column-stacked
// index k = i + j*D: the diagonal keeps rho(i, i), k with i < j holds
// Re rho(i, j) and k with i > j holds Im rho(j, i).
struct HermitianCoordinates {
    SparseMatrix to_vec;    // real coordinates -> vec(rho)
    SparseMatrix from_vec;  // vec(rho) -> real coordinates (exact on Hermitian input)

    explicit HermitianCoordinates(std::size_t dim) {
        const auto d = static_cast<Index>(dim);
        const Index n = d * d;
        std::vector<Eigen::Triplet<Complex>> u, w;
        u.reserve(2 * n);
        w.reserve(2 * n);
        const Complex i_unit(0.0, 1.0);
        for (Index col = 0; col < d; ++col) {
            for (Index row = 0; row < d; ++row) {
                const Index k = row + col * d;
                const Index mirror = col + row * d;
                if (row == col) {
                    u.emplace_back(k, k, 1.0);
                    w.emplace_back(k, k, 1.0);
                } else if (row < col) {
                    u.emplace_back(k, k, 1.0);
                    u.emplace_back(mirror, k, 1.0);
                    w.emplace_back(k, k, 0.5);
                    w.emplace_back(k, mirror, 0.5);
                } else {
                    // k stores Im rho(col, row); `mirror` is that upper entry.
                    u.emplace_back(mirror, k, i_unit);
                    u.emplace_back(k, k, -i_unit);
                    w.emplace_back(k, mirror, -0.5 * i_unit);
                    w.emplace_back(k, k, 0.5 * i_unit);
                }
            }
        }
        to_vec.resize(n, n);
        from_vec.resize(n, n);
        to_vec.setFromTriplets(u.begin(), u.end());
        from_vec.setFromTriplets(w.begin(), w.end());
    }
};

template <typename Scalar>
Eigen::SparseMatrix<Scalar> bordered_system(const Eigen::SparseMatrix<Scalar>& l, std::size_t dim) {
    const auto n = l.rows();
    Eigen::SparseMatrix<Scalar> bordered = l;
    bordered.prune([](Index row, Index, const Scalar&) { return row != 0; });
    Eigen::SparseMatrix<Scalar> trace_row(n, n);
    std::vector<Eigen::Triplet<Scalar>> entries;
    entries.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) entries.emplace_back(0, static_cast<Index>(i * dim + i), Scalar(1.0));
    trace_row.setFromTriplets(entries.begin(), entries.end());
    bordered += trace_row;
    bordered.makeCompressed();
    return bordered;
}

template <typename Solver, typename Mat, typename Vec>
Vec solve_refined(Solver& solver, const Mat& a, const Vec& rhs, SolverStats& stats) {
    Vec x = solver.solve(rhs);
    x += solver.solve(Vec(rhs - a * x));
    stats.refinement_steps = 1;
    return x;
}

Vector solve_complex(const Liouvillian& l, SolverStats& stats) {
    const std::size_t d = l.hilbert_dim();
    const SparseMatrix a = bordered_system(l.superop, d);
    Vector rhs = Vector::Zero(a.rows());
    rhs(0) = 1.0;

    const auto t0 = std::chrono::steady_clock::now();
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    stats.factorization_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (lu.info() != Eigen::Success) fail_solve(l, "steady_state: factorization failed: " + lu.lastErrorMessage());
    return solve_refined(lu, a, rhs, stats);
}

Vector solve_hermitian(const Liouvillian& l, SolverStats& stats) {
    const std::size_t d = l.hilbert_dim();
    const HermitianCoordinates coords(d);
    // L preserves Hermiticity, so W L U is real up to roundoff.
    const SparseMatrix complex_block = coords.from_vec * l.superop * coords.to_vec;
    RealSparse real_block = complex_block.real();
    real_block.prune(0.0, 0.0);
    const RealSparse a = bordered_system(real_block, d);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(a.rows());
    rhs(0) = 1.0;

    const auto t0 = std::chrono::steady_clock::now();
    Eigen::UmfPackLU<RealSparse> lu;
    lu.compute(a);
    stats.factorization_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (lu.info() != Eigen::Success) fail_solve(l, "steady_state: UMFPACK factorization failed");
    const Eigen::VectorXd x = solve_refined(lu, a, rhs, stats);
    return coords.to_vec * x.cast<Complex>();
}

}  // namespace

SteadyStateReport steady_state(const Liouvillian& l, SteadyMethod method) {
    const std::size_t d = l.hilbert_dim();
    SolverStats stats;
    stats.superop_dim = d * d;
    stats.nonzeros = static_cast<std::size_t>(l.superop.nonZeros());

    const Vector x = method == SteadyMethod::HermitianReal ? solve_hermitian(l, stats) : solve_complex(l, stats);
    if (!x.allFinite()) fail_solve(l, "steady_state: non-finite solution");

    Matrix rho = devectorize(x, d);
    stats.asymmetry_before_hermitization = hermiticity_error(rho);
    if (stats.asymmetry_before_hermitization > kAsymmetryTol)
        fail_solve(l, "steady_state: solution is not Hermitian (asymmetry " +
                          sci(stats.asymmetry_before_hermitization) + ")");
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();

    const double residual = max_abs(l.superop * vectorize(rho));
    if (residual > kResidualTol) fail_solve(l, "steady_state: residual " + sci(residual) + " above tolerance");

    stats.trace_error = std::abs(rho.trace() - Complex(1.0));
    stats.min_eigenvalue = min_hermitian_eigenvalue(rho);
    if (stats.min_eigenvalue < -DensityMatrix::kPsdTol)
        throw ConvergenceFailure("steady_state: negative eigenvalue " + sci(stats.min_eigenvalue));

    DensityMatrix state(l.space, std::move(rho));
    const double tail = cavity_tail_population(state);
    return {std::move(state), residual, tail, tail > kTailTol, stats};
}

// ---------------------------------------------------------------------------

DensityMatrix time_evolve(const LindbladModel& m, const DensityMatrix& rho0, double t_final, double dt,
                          const EvolveOptions& options, EvolveStats* stats) {
    if (!(rho0.space() == m.space())) throw InvalidArgument("time_evolve: initial state on wrong space");
    if (!(t_final >= 0.0) || !(dt > 0.0)) throw InvalidArgument("time_evolve: need t_final >= 0 and dt > 0");

    const Liouvillian l = build_liouvillian(m);
    const std::size_t d = l.hilbert_dim();
    const SparseMatrix& op = l.superop;

    auto rk4 = [&op](const Vector& y, double h) {
        const Vector k1 = op * y;
        const Vector k2 = op * (y + 0.5 * h * k1);
        const Vector k3 = op * (y + 0.5 * h * k2);
        const Vector k4 = op * (y + h * k3);
        return Vector(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    };

    Vector y = vectorize(rho0.matrix());
    double t = 0.0;
    double h = std::min(dt, t_final);
    EvolveStats local;
    std::size_t consecutive_rejections = 0;

    while (t < t_final) {
        const bool last = t + h >= t_final;
        if (last) h = t_final - t;
        if (h <= 0.0) break;

        const Vector full = rk4(y, h);
        const Vector half = rk4(rk4(y, 0.5 * h), 0.5 * h);
        const double err = max_abs(half - full) / 15.0;

        if (!std::isfinite(err) || err > options.tolerance) {
            ++local.rejected_steps;
            if (++consecutive_rejections > options.max_consecutive_rejections || h < options.min_step)
                throw StiffnessError("time_evolve: step rejected repeatedly at t=" + sci(t) + " (h=" + sci(h) +
                                     "); try a smaller dt");
            const double factor = std::isfinite(err) ? 0.9 * std::pow(options.tolerance / err, 0.2) : 0.1;
            h *= std::clamp(factor, 0.1, 0.5);
            continue;
        }
        consecutive_rejections = 0;
        y = half;
        t = last ? t_final : t + h;
        ++local.accepted_steps;
        local.last_step = h;

        const Matrix rho = devectorize(y, d);
        const double herm = hermiticity_error(rho);
        const double tr = std::abs(rho.trace() - Complex(1.0));
        if (herm > DensityMatrix::kHermitianTol || tr > DensityMatrix::kTraceTol ||
            min_hermitian_eigenvalue(0.5 * (rho + rho.adjoint())) < -DensityMatrix::kPsdTol)
            throw StiffnessError("time_evolve: density-matrix contract violated at t=" + sci(t) +
                                 "; try a smaller dt");

        const double grow = err > 0.0 ? 0.9 * std::pow(options.tolerance / err, 0.2) : 2.0;
        h *= std::clamp(grow, 0.2, 2.0);
    }
    if (stats) *stats = local;

    Matrix rho = devectorize(y, d);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return {m.space(), std::move(rho)};
}

}  // namespace hyperq
