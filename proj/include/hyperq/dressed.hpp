#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "hyperq/model.hpp"
#include "hyperq/operator_core.hpp"

namespace hyperq {

/// Two-qubit collective states: |gg>, |+> = (|eg> + |ge>)/sqrt2,
/// |-> = (|eg> - |ge>)/sqrt2, |ee>.
enum class Collective { GG, Plus, Minus, EE };

const char* to_string(Collective c);

/// 4x4 unitary whose columns are |gg>, |+>, |->, |ee> in the bare
/// two-qubit basis (|gg>, |ge>, |eg>, |ee>).
Matrix collective_basis();

/// D_+/- = (sigma_-^1 +/- sigma_-^2) / sqrt2 on [2, 2, n_max + 1].
Operator collective_lowering(int sign, std::size_t n_max);

/// |c, n> on [2, 2, n_max + 1].
Vector collective_state(Collective c, std::size_t photons, std::size_t n_max);

/// Coupling-only part sum_i g_i (a^+ sigma_-^i + a sigma_+^i).
Operator interaction_hamiltonian(const ModelParams& p);

/// Dressed states of one excitation manifold of the undriven resonant
/// out-phase Hamiltonian. Eigenvalues are in units of g, sorted ascending.
struct ManifoldSpectrum {
    std::size_t n = 0;
    /// |gg,n>, |-,n-1>, |ee,n-2>, |+,n-1>  (|ee,n-2> absent for n = 1)
    std::vector<std::string> basis;
    std::vector<double> eigenvalues;
    Matrix eigenvectors;  ///< column k belongs to eigenvalues[k], coefficients over `basis`
    /// "Psi-", "Phi0", "Psi0", "Psi+" (no "Phi0" for n = 1)
    std::vector<std::string> labels;
};

/// Diagonalizes the excitation-n block numerically. Throws InvalidArgument for
/// n < 1 or g == 0, and std::logic_error if the closed-form eigenvalues
/// {+-sqrt(4n-2), 0 (twice for n >= 2)} are not reproduced to 1e-10 relative.
ManifoldSpectrum manifold_spectrum(std::size_t n, double g);

struct PathwayElement {
    std::string from;
    std::string to;
    Complex amplitude;  ///< <to|H|from>, units of gamma
};

/// Drive and coupling elements along |gg,n> -> |+,n> -> |ee,n> <-> |-,n+1> <-> |gg,n+2>,
/// read off the assembled Hamiltonian. Requires the out-phase preset and
/// n + 2 <= n_max.
std::vector<PathwayElement> pathway_amplitudes(std::size_t n, const ModelParams& p);

/// <to|H|from> for collective basis states of the full two-qubit Hamiltonian.
Complex collective_element(const Operator& h, Collective to, std::size_t to_photons, Collective from,
                           std::size_t from_photons);

/// |<gg,1|H_int|+,0>|; zero for out-phase coupling, sqrt2 g in phase.
double interference_check(const ModelParams& p);

/// Plain-text manifold table (n = 1..max_n) and pathway elements.
std::string dressed_report(const ModelParams& p, std::size_t max_n);

}  // namespace hyperq
