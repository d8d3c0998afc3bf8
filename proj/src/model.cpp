#include "hyperq/model.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "hyperq/errors.hpp"

namespace hyperq {

ModelParams ModelParams::out_phase(double g, double kappa, double delta, double eta, std::size_t n_max) {
    ModelParams p;
    p.delta_a = p.delta_c = delta;
    p.g1 = g;
    p.g2 = -g;
    p.eta = eta;
    p.kappa = kappa;
    p.n_max = n_max;
    return p;
}

ModelParams ModelParams::in_phase(double g, double kappa, double delta, double eta, std::size_t n_max) {
    ModelParams p = out_phase(g, kappa, delta, eta, n_max);
    p.g2 = g;
    return p;
}

void ModelParams::validate() const {
    for (double v : {delta_a, delta_c, g1, g2, eta, kappa, gamma})
        if (!std::isfinite(v)) throw InvalidArgument("ModelParams: non-finite parameter");
    if (kappa < 0.0) throw InvalidArgument("ModelParams: kappa must be >= 0");
    if (gamma <= 0.0) throw InvalidArgument("ModelParams: gamma must be > 0");
    if (n_max < 1) throw InvalidArgument("ModelParams: n_max must be >= 1");
}

TwoQubitCavityOps::TwoQubitCavityOps(std::size_t n_max)
    : a(embed(fock_annihilation(n_max), 2, SpaceDescriptor::two_qubit_cavity(n_max))),
      sm1(embed(qubit_lowering(), 0, SpaceDescriptor::two_qubit_cavity(n_max))),
      sm2(embed(qubit_lowering(), 1, SpaceDescriptor::two_qubit_cavity(n_max))) {}

LindbladModel build_two_qubit_model(const ModelParams& p) {
    p.validate();
    const TwoQubitCavityOps ops(p.n_max);
    const Operator ad = ops.a.dagger();
    const Operator sp1 = ops.sm1.dagger();
    const Operator sp2 = ops.sm2.dagger();

    Operator h = p.delta_c * (ad * ops.a);
    h += p.delta_a * (sp1 * ops.sm1 + sp2 * ops.sm2);
    h += p.g1 * (ad * ops.sm1 + ops.a * sp1);
    h += p.g2 * (ad * ops.sm2 + ops.a * sp2);
    h += p.eta * (ops.sm1 + sp1 + ops.sm2 + sp2);

    return {std::move(h), {{ops.a, p.kappa}, {ops.sm1, p.gamma}, {ops.sm2, p.gamma}}};
}

LindbladModel build_single_qubit_model(const ModelParams& p, int which) {
    if (which != 1 && which != 2) throw InvalidArgument("build_single_qubit_model: which must be 1 or 2");
    p.validate();
    const double g = which == 1 ? p.g1 : p.g2;
    const auto space = SpaceDescriptor::qubit_cavity(p.n_max);
    const Operator a = embed(fock_annihilation(p.n_max), 1, space);
    const Operator sm = embed(qubit_lowering(), 0, space);
    const Operator ad = a.dagger();
    const Operator sp = sm.dagger();

    Operator h = p.delta_c * (ad * a);
    h += p.delta_a * (sp * sm);
    h += g * (ad * sm + a * sp);
    h += p.eta * (sm + sp);

    return {std::move(h), {{a, p.kappa}, {sm, p.gamma}}};
}

DensityMatrix build_driven_cavity_model(Complex alpha, std::size_t n_max) {
    if (n_max < 1) throw InvalidArgument("build_driven_cavity_model: n_max must be >= 1");
    const double mean = std::norm(alpha);
    const auto n = static_cast<Eigen::Index>(n_max + 1);
    Vector psi(n);
    // Fock amplitudes e^{-|a|^2/2} a^k / sqrt(k!), built by recurrence.
    psi(0) = std::exp(-0.5 * mean);
    double kept = std::norm(psi(0));
    for (Eigen::Index k = 1; k < n; ++k) {
        psi(k) = psi(k - 1) * alpha / std::sqrt(static_cast<double>(k));
        kept += std::norm(psi(k));
    }
    const double tail = 1.0 - kept;
    if (tail > 1e-10)
    {
        char buf[128];
        std::snprintf(buf, sizeof buf, "coherent state with |alpha|^2 = %.4g loses %.3e probability above n_max", mean, tail);
        throw TruncationTooSmall(buf);
    }
    return DensityMatrix::pure(SpaceDescriptor::cavity(n_max), psi);
}

std::size_t default_n_max(double eta) {
    const double e = std::abs(eta);
    if (e <= 1.5) return 20;
    if (e <= 3.0) return 30;
    return 40;
}

}  // namespace hyperq
