#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hyperq/model.hpp"
#include "hyperq/operator_core.hpp"

namespace hyperq {

/// Photon-number probabilities P_n, n = 0..n_max, of the cavity (last slot).
struct PhotonDistribution {
    std::vector<double> p;

    std::size_t n_max() const noexcept { return p.empty() ? 0 : p.size() - 1; }
    double mean() const;
};

/// Cavity marginal of a composite state; identity for cavity-only states.
DensityMatrix cavity_state(const DensityMatrix& rho);

PhotonDistribution photon_distribution(const DensityMatrix& rho);

/// First and second cavity moments <a>, <a^2>, <a^+ a>.
struct CavityMoments {
    Complex a;
    Complex a2;
    double n = 0.0;
};

CavityMoments cavity_moments(const DensityMatrix& rho);

// ---------------------------------------------------------------------------
// Radiance witness

/// (n2 - (n11 + n12)) / (n11 + n12). Throws UndefinedWitness when the
/// denominator is below 1e-14.
double radiance_witness_from(double nbar_two_qubit, double nbar_single_1, double nbar_single_2);

struct RadianceComponents {
    double nbar_two_qubit = 0.0;
    double nbar_single_1 = 0.0;
    double nbar_single_2 = 0.0;
    double witness = 0.0;
};

/// Runs the two-qubit and both single-qubit steady states. When |g1| = |g2|
/// the two single-qubit photon numbers are checked to agree to 1e-9
/// (relative); a mismatch throws std::logic_error.
RadianceComponents radiance_components(const ModelParams& p);
double radiance_witness(const ModelParams& p);

/// Throws std::logic_error if |g1| = |g2| but the single-qubit photon
/// numbers differ by more than 1e-9 relative.
void check_single_qubit_symmetry(const ModelParams& p, double nbar_single_1, double nbar_single_2);

// ---------------------------------------------------------------------------
// Quadrature squeezing

/// S_theta = Var(X_theta) - 1/2 with X_theta = (a e^{-i theta} + a^+ e^{i theta}) / sqrt(2),
/// evaluated as <a^+a> + Re(e^{-2i theta} <a^2>) - 2 [Re(e^{-i theta} <a>)]^2.
/// Periodic in theta with period pi.
double squeezing_parameter(const DensityMatrix& rho, double theta);
double squeezing_parameter(const CavityMoments& m, double theta);

struct SqueezingResult {
    double s_min = 0.0;
    double theta_s = 0.0;                ///< in [0, pi)
    std::vector<double> theta_samples;   ///< k * pi / 720
    std::vector<double> s_of_theta;
};

inline constexpr std::size_t kThetaGrid = 720;

/// Global minimum of S_theta over [0, pi). Ties go to the smaller angle.
SqueezingResult min_squeezing(const DensityMatrix& rho);
SqueezingResult min_squeezing(const CavityMoments& m);

// ---------------------------------------------------------------------------
// Klyshko criterion

struct KlyshkoEntry {
    std::size_t n = 0;
    std::optional<double> value;  ///< empty where P_n is below the floor
};

struct KlyshkoResult {
    std::vector<KlyshkoEntry> k;
};

/// K_n = (n+1) P_{n-1} P_{n+1} / (n P_n^2) for n = 1..n_max-1.
KlyshkoResult klyshko(const PhotonDistribution& pdist, double floor = 1e-12);

// ---------------------------------------------------------------------------
// Wigner function

struct WignerGridSpec {
    double x_min = -4.0;
    double x_max = 4.0;
    std::size_t nx = 161;
    double y_min = -4.0;
    double y_max = 4.0;
    std::size_t ny = 161;

    void validate() const;
};

struct WignerMoments {
    double mean_x = 0.0;
    double mean_y = 0.0;
    double var_x = 0.0;
    double var_y = 0.0;
    double cov_xy = 0.0;
    double minor_variance = 0.0;  ///< smallest quadrature variance
    double minor_angle = 0.0;     ///< quadrature angle of that variance, in [0, pi)
};

/// W sampled at alpha = (x + i y) / sqrt(2), so x and y are the X and Y
/// quadratures. Normalized so that the integral over d^2 alpha = dx dy / 2 is 1
/// and the vacuum peak is 2 / pi.
struct WignerGrid {
    std::vector<double> x_axis;
    std::vector<double> y_axis;
    Eigen::MatrixXd w;  ///< w(iy, ix)
    bool grid_too_small = false;
    double max_imag = 0.0;  ///< largest |Im W| before it was dropped

    static constexpr const char* kConvention =
        "displaced-parity W(alpha)=(2/pi)Tr[rho D(alpha) P D(-alpha)], alpha=(x+iy)/sqrt(2), integral W dx dy/2 = 1";

    double integral() const;
    WignerMoments moments() const;
};

/// Displaced-parity Wigner function of a cavity-only state. Displacements are
/// exact matrix exponentials on a space padded beyond the state's truncation.
WignerGrid wigner(const DensityMatrix& rho_cavity, const WignerGridSpec& grid);

}  // namespace hyperq
