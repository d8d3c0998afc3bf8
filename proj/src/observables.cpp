#include "hyperq/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hyperq/errors.hpp"
#include "hyperq/steady_solver.hpp"

namespace hyperq {

namespace {

using Index = Eigen::Index;
constexpr double kPi = std::numbers::pi;

double wrap_to_pi(double theta) {
    double t = std::fmod(theta, kPi);
    if (t < 0.0) t += kPi;
    if (t >= kPi) t -= kPi;
    return t;
}

double nbar_of(const LindbladModel& m) {
    const auto report = steady_state(build_liouvillian(m));
    const auto pd = photon_distribution(report.rho);
    return pd.mean();
}

}  // namespace

double PhotonDistribution::mean() const {
    double s = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) s += static_cast<double>(n) * p[n];
    return s;
}

DensityMatrix cavity_state(const DensityMatrix& rho) {
    if (rho.space().slots() == 1) return rho;
    return partial_trace(rho, {rho.space().slots() - 1});
}

PhotonDistribution photon_distribution(const DensityMatrix& rho) {
    // Diagonal of the cavity marginal, read straight off the full diagonal.
    const std::size_t levels = rho.space().dims().back();
    if (levels < 2) throw InvalidArgument("photon_distribution: last slot is not a cavity");
    PhotonDistribution pd;
    pd.p.assign(levels, 0.0);
    for (std::size_t i = 0; i < rho.dim(); ++i)
        pd.p[i % levels] += rho.matrix()(static_cast<Index>(i), static_cast<Index>(i)).real();
    for (auto& v : pd.p) v = std::max(v, 0.0);
    return pd;
}

CavityMoments cavity_moments(const DensityMatrix& rho) {
    const DensityMatrix rc = cavity_state(rho);
    const std::size_t n_max = rc.dim() - 1;
    const Operator a = fock_annihilation(n_max);
    CavityMoments m;
    m.a = expect(a, rc);
    m.a2 = expect(a * a, rc);
    m.n = expect(a.dagger() * a, rc).real();
    return m;
}

// ---------------------------------------------------------------------------

double radiance_witness_from(double nbar_two_qubit, double nbar_single_1, double nbar_single_2) {
    const double single = nbar_single_1 + nbar_single_2;
    if (!(std::abs(single) >= 1e-14))
        throw UndefinedWitness("radiance witness undefined: single-qubit photon number " + std::to_string(single));
    return (nbar_two_qubit - single) / single;
}

void check_single_qubit_symmetry(const ModelParams& p, double nbar_single_1, double nbar_single_2) {
    if (std::abs(p.g1) != std::abs(p.g2)) return;
    const double scale = std::max({std::abs(nbar_single_1), std::abs(nbar_single_2), 1e-300});
    if (std::abs(nbar_single_1 - nbar_single_2) > 1e-9 * scale)
        throw std::logic_error("single-qubit reference solves disagree although |g1| = |g2|");
}

RadianceComponents radiance_components(const ModelParams& p) {
    RadianceComponents rc;
    rc.nbar_two_qubit = nbar_of(build_two_qubit_model(p));
    rc.nbar_single_1 = nbar_of(build_single_qubit_model(p, 1));
    rc.nbar_single_2 = nbar_of(build_single_qubit_model(p, 2));
    check_single_qubit_symmetry(p, rc.nbar_single_1, rc.nbar_single_2);
    rc.witness = radiance_witness_from(rc.nbar_two_qubit, rc.nbar_single_1, rc.nbar_single_2);
    return rc;
}

double radiance_witness(const ModelParams& p) { return radiance_components(p).witness; }

// ---------------------------------------------------------------------------

double squeezing_parameter(const CavityMoments& m, double theta) {
    const Complex rot = std::polar(1.0, -theta);
    const double displacement = (rot * m.a).real();
    return m.n + (rot * rot * m.a2).real() - 2.0 * displacement * displacement;
}

double squeezing_parameter(const DensityMatrix& rho, double theta) {
    return squeezing_parameter(cavity_moments(rho), theta);
}

SqueezingResult min_squeezing(const CavityMoments& m) {
    SqueezingResult r;
    r.theta_samples.resize(kThetaGrid);
    r.s_of_theta.resize(kThetaGrid);
    for (std::size_t k = 0; k < kThetaGrid; ++k) {
        r.theta_samples[k] = kPi * static_cast<double>(k) / static_cast<double>(kThetaGrid);
        r.s_of_theta[k] = squeezing_parameter(m, r.theta_samples[k]);
    }

    if (std::abs(m.a) <= 1e-12) {
        // Pure sinusoid: n + |<a^2>| cos(2 theta - arg<a^2>).
        r.s_min = m.n - std::abs(m.a2);
        r.theta_s = std::abs(m.a2) <= 1e-12 ? 0.0 : wrap_to_pi(0.5 * (std::arg(m.a2) + kPi));
        return r;
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k < kThetaGrid; ++k)
        if (r.s_of_theta[k] < r.s_of_theta[best]) best = k;

    // Successive parabolic interpolation around the grid minimum.
    double theta = r.theta_samples[best];
    double s = r.s_of_theta[best];
    double h = kPi / static_cast<double>(kThetaGrid);
    for (int iter = 0; iter < 200; ++iter) {
        const double sm = squeezing_parameter(m, theta - h);
        const double sp = squeezing_parameter(m, theta + h);
        const double curvature = sp - 2.0 * s + sm;
        double candidate = theta;
        if (curvature > 0.0) candidate = theta - 0.5 * h * (sp - sm) / curvature;
        const double sc = squeezing_parameter(m, candidate);
        const double drop = s - sc;
        if (sc < s) {
            theta = candidate;
            s = sc;
        }
        if (std::abs(drop) <= 1e-12 && h < 1e-6) break;
        h *= 0.25;
        if (h < 1e-14) break;
    }
    r.s_min = s;
    r.theta_s = wrap_to_pi(theta);
    return r;
}

SqueezingResult min_squeezing(const DensityMatrix& rho) { return min_squeezing(cavity_moments(rho)); }

// ---------------------------------------------------------------------------

KlyshkoResult klyshko(const PhotonDistribution& pdist, double floor) {
    KlyshkoResult r;
    const auto& p = pdist.p;
    for (std::size_t n = 1; n + 1 < p.size(); ++n) {
        KlyshkoEntry e{n, std::nullopt};
        if (p[n] >= floor && p[n] > 0.0) {
            const double nn = static_cast<double>(n);
            e.value = (nn + 1.0) * p[n - 1] * p[n + 1] / (nn * p[n] * p[n]);
        }
        r.k.push_back(e);
    }
    return r;
}

// ---------------------------------------------------------------------------

void WignerGridSpec::validate() const {
    if (nx < 2 || ny < 2) throw InvalidArgument("WignerGridSpec: need at least 2 points per axis");
    if (!(x_max > x_min) || !(y_max > y_min)) throw InvalidArgument("WignerGridSpec: empty axis range");
    for (double v : {x_min, x_max, y_min, y_max})
        if (!std::isfinite(v)) throw InvalidArgument("WignerGridSpec: non-finite bound");
}

double WignerGrid::integral() const {
    const double dx = (x_axis.back() - x_axis.front()) / static_cast<double>(x_axis.size() - 1);
    const double dy = (y_axis.back() - y_axis.front()) / static_cast<double>(y_axis.size() - 1);
    return w.sum() * dx * dy / 2.0;
}

WignerMoments WignerGrid::moments() const {
    const double dx = (x_axis.back() - x_axis.front()) / static_cast<double>(x_axis.size() - 1);
    const double dy = (y_axis.back() - y_axis.front()) / static_cast<double>(y_axis.size() - 1);
    const double cell = dx * dy / 2.0;
    double s0 = 0, sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (Index iy = 0; iy < w.rows(); ++iy) {
        const double y = y_axis[static_cast<std::size_t>(iy)];
        for (Index ix = 0; ix < w.cols(); ++ix) {
            const double x = x_axis[static_cast<std::size_t>(ix)];
            const double v = w(iy, ix) * cell;
            s0 += v;
            sx += v * x;
            sy += v * y;
            sxx += v * x * x;
            syy += v * y * y;
            sxy += v * x * y;
        }
    }
    WignerMoments m;
    m.mean_x = sx / s0;
    m.mean_y = sy / s0;
    m.var_x = sxx / s0 - m.mean_x * m.mean_x;
    m.var_y = syy / s0 - m.mean_y * m.mean_y;
    m.cov_xy = sxy / s0 - m.mean_x * m.mean_y;

    Eigen::Matrix2d c;
    c << m.var_x, m.cov_xy, m.cov_xy, m.var_y;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(c);
    m.minor_variance = es.eigenvalues()(0);
    const Eigen::Vector2d v = es.eigenvectors().col(0);
    m.minor_angle = wrap_to_pi(std::atan2(v(1), v(0)));
    return m;
}

WignerGrid wigner(const DensityMatrix& rho_cavity, const WignerGridSpec& grid) {
    grid.validate();
    if (rho_cavity.space().slots() != 1)
        throw InvalidArgument("wigner: expected a cavity-only state (partial-trace first)");

    WignerGrid out;
    out.x_axis.resize(grid.nx);
    out.y_axis.resize(grid.ny);
    for (std::size_t i = 0; i < grid.nx; ++i)
        out.x_axis[i] = grid.x_min + (grid.x_max - grid.x_min) * static_cast<double>(i) / static_cast<double>(grid.nx - 1);
    for (std::size_t i = 0; i < grid.ny; ++i)
        out.y_axis[i] = grid.y_min + (grid.y_max - grid.y_min) * static_cast<double>(i) / static_cast<double>(grid.ny - 1);

    // Pad the Fock space so displaced states stay representable.
    const double reach = std::max({std::abs(grid.x_min), std::abs(grid.x_max), std::abs(grid.y_min),
                                   std::abs(grid.y_max)});
    const double alpha_max = reach / std::sqrt(2.0);
    const std::size_t levels = rho_cavity.dim();
    const auto dim = static_cast<Index>(levels + static_cast<std::size_t>(std::ceil(
                                                     alpha_max * alpha_max + 10.0 * alpha_max + 30.0)));

    Matrix rho = Matrix::Zero(dim, dim);
    rho.topLeftCorner(static_cast<Index>(levels), static_cast<Index>(levels)) = rho_cavity.matrix();

    // D(alpha) = D(x / sqrt 2) D(i y / sqrt 2) up to a phase that cancels in
    // D P D^+. Both factors are exponentials of quadrature operators, which
    // we diagonalize once: D(x/sqrt2) = exp(-i x P), D(i y/sqrt2) = exp(i y X).
    Matrix a = Matrix::Zero(dim, dim);
    for (Index k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    const Complex i_unit(0.0, 1.0);
    const Matrix xq = (a + a.adjoint()) / std::sqrt(2.0);
    const Matrix pq = i_unit * (a.adjoint() - a) / std::sqrt(2.0);
    Eigen::SelfAdjointEigenSolver<Matrix> ex(xq), ep(pq);

    auto unitary = [](const Eigen::SelfAdjointEigenSolver<Matrix>& es, Complex scale) {
        const Vector phases = (scale * es.eigenvalues().cast<Complex>()).array().exp().matrix();
        return Matrix(es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint());
    };

    Vector parity(dim);
    for (Index k = 0; k < dim; ++k) parity(k) = (k % 2 == 0) ? 1.0 : -1.0;

    // Displaced parity per y: D_y P D_y^+ ; rotated state per x: D_x^+ rho D_x.
    std::vector<Matrix> displaced_parity(grid.ny);
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
        const Matrix dy = unitary(ex, i_unit * out.y_axis[iy]);
        displaced_parity[iy] = dy * parity.asDiagonal() * dy.adjoint();
    }

    out.w.resize(static_cast<Index>(grid.ny), static_cast<Index>(grid.nx));
    double max_imag = 0.0;
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
        const Matrix dx = unitary(ep, -i_unit * out.x_axis[ix]);
        const Matrix shifted = dx.adjoint() * rho * dx;
        for (std::size_t iy = 0; iy < grid.ny; ++iy) {
            // Tr(shifted * parity_y) = sum_jk shifted(j,k) parity_y(k,j)
            const Complex tr = (shifted.transpose().cwiseProduct(displaced_parity[iy])).sum();
            out.w(static_cast<Index>(iy), static_cast<Index>(ix)) = 2.0 / kPi * tr.real();
            max_imag = std::max(max_imag, std::abs(2.0 / kPi * tr.imag()));
        }
    }
    out.max_imag = max_imag;

    const double peak = out.w.cwiseAbs().maxCoeff();
    double edge = 0.0;
    const Index rows = out.w.rows(), cols = out.w.cols();
    edge = std::max({out.w.row(0).cwiseAbs().maxCoeff(), out.w.row(rows - 1).cwiseAbs().maxCoeff(),
                     out.w.col(0).cwiseAbs().maxCoeff(), out.w.col(cols - 1).cwiseAbs().maxCoeff()});
    out.grid_too_small = edge > 1e-3 * peak;
    return out;
}

}  // namespace hyperq
