#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hyperq/operator_core.hpp"

namespace hyperq {

/// Physical knobs of the driven two-qubit cavity. All rates and frequencies
/// are in units of the qubit decay rate gamma, which is 1 internally.
struct ModelParams {
    double delta_a = 0.0;  ///< qubit detuning from the pump
    double delta_c = 0.0;  ///< cavity detuning from the pump
    double g1 = 10.0;
    double g2 = -10.0;
    double eta = 0.5;  ///< pump Rabi frequency on each qubit
    double kappa = 0.5;
    double gamma = 1.0;
    std::size_t n_max = 20;

    /// g1 = -g2 = g, delta_a = delta_c = delta.
    static ModelParams out_phase(double g, double kappa, double delta, double eta, std::size_t n_max = 20);
    /// g1 = g2 = g, delta_a = delta_c = delta.
    static ModelParams in_phase(double g, double kappa, double delta, double eta, std::size_t n_max = 20);

    /// Throws InvalidArgument unless kappa >= 0, gamma > 0, n_max >= 1 and all values finite.
    void validate() const;
    bool is_out_phase() const noexcept { return g1 == -g2; }
};

/// Collapse operator c with rate r contributes r * (2 c rho c^+ - rho c^+ c - c^+ c rho).
struct CollapseChannel {
    Operator op;
    double rate;
};

struct LindbladModel {
    Operator hamiltonian;
    std::vector<CollapseChannel> collapse_channels;

    const SpaceDescriptor& space() const noexcept { return hamiltonian.space(); }
};

/// Operators of the [q1, q2, cavity] space used throughout the project.
struct TwoQubitCavityOps {
    Operator a;
    Operator sm1;
    Operator sm2;
    explicit TwoQubitCavityOps(std::size_t n_max);
};

LindbladModel build_two_qubit_model(const ModelParams& p);

/// Reference system with only qubit `which` (1 or 2) in the cavity.
LindbladModel build_single_qubit_model(const ModelParams& p, int which);

/// Truncated coherent state |alpha> on the cavity space, renormalized.
/// Throws TruncationTooSmall if the Poisson mass above n_max exceeds 1e-10.
DensityMatrix build_driven_cavity_model(Complex alpha, std::size_t n_max);

/// Lowest N_max we use by default for a given pump strength.
std::size_t default_n_max(double eta);

}  // namespace hyperq
