#include "hyperq/dressed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "hyperq/errors.hpp"

namespace hyperq {

namespace {

using Index = Eigen::Index;

std::size_t collective_column(Collective c) {
    switch (c) {
        case Collective::GG: return 0;
        case Collective::Plus: return 1;
        case Collective::Minus: return 2;
        case Collective::EE: return 3;
    }
    return 0;
}

std::string ket(Collective c, std::size_t photons) {
    return "|" + std::string(to_string(c)) + "," + std::to_string(photons) + ">";
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace

const char* to_string(Collective c) {
    switch (c) {
        case Collective::GG: return "gg";
        case Collective::Plus: return "+";
        case Collective::Minus: return "-";
        case Collective::EE: return "ee";
    }
    return "?";
}

Matrix collective_basis() {
    // bare order: |gg>=0, |ge>=1, |eg>=2, |ee>=3
    const double s = 1.0 / std::sqrt(2.0);
    Matrix b = Matrix::Zero(4, 4);
    b(0, 0) = 1.0;
    b(2, 1) = s;
    b(1, 1) = s;
    b(2, 2) = s;
    b(1, 2) = -s;
    b(3, 3) = 1.0;
    return b;
}

Operator collective_lowering(int sign, std::size_t n_max) {
    if (sign != 1 && sign != -1) throw InvalidArgument("collective_lowering: sign must be +1 or -1");
    const TwoQubitCavityOps ops(n_max);
    return (ops.sm1 + static_cast<double>(sign) * ops.sm2) * Complex(1.0 / std::sqrt(2.0));
}

Vector collective_state(Collective c, std::size_t photons, std::size_t n_max) {
    if (photons > n_max) throw InvalidArgument("collective_state: photon number above truncation");
    const auto levels = static_cast<Index>(n_max + 1);
    const Matrix b = collective_basis();
    Vector v = Vector::Zero(4 * levels);
    const auto col = static_cast<Index>(collective_column(c));
    for (Index q = 0; q < 4; ++q) v(q * levels + static_cast<Index>(photons)) = b(q, col);
    return v;
}

Operator interaction_hamiltonian(const ModelParams& p) {
    p.validate();
    const TwoQubitCavityOps ops(p.n_max);
    const Operator ad = ops.a.dagger();
    Operator h = p.g1 * (ad * ops.sm1 + ops.a * ops.sm1.dagger());
    h += p.g2 * (ad * ops.sm2 + ops.a * ops.sm2.dagger());
    return h;
}

Complex collective_element(const Operator& h, Collective to, std::size_t to_photons, Collective from,
                           std::size_t from_photons) {
    const std::size_t n_max = h.space().cavity_n_max();
    const Vector bra = collective_state(to, to_photons, n_max);
    const Vector k = collective_state(from, from_photons, n_max);
    return bra.dot(h.matrix() * k);  // dot() conjugates the left operand
}

ManifoldSpectrum manifold_spectrum(std::size_t n, double g) {
    if (n < 1) throw InvalidArgument("manifold_spectrum: n must be >= 1");
    if (g == 0.0 || !std::isfinite(g)) throw InvalidArgument("manifold_spectrum: g must be finite and non-zero");

    const ModelParams p = ModelParams::out_phase(g, 0.0, 0.0, 0.0, n);
    const Operator h = build_two_qubit_model(p).hamiltonian;

    ManifoldSpectrum ms;
    ms.n = n;
    struct Member {
        Collective c;
        std::size_t photons;
    };
    std::vector<Member> coupled{{Collective::GG, n}, {Collective::Minus, n - 1}};
    if (n >= 2) coupled.push_back({Collective::EE, n - 2});
    const Member dark{Collective::Plus, n - 1};

    std::vector<Member> all = coupled;
    all.push_back(dark);
    for (const auto& m : all) ms.basis.push_back(ket(m.c, m.photons));

    const auto size = static_cast<Index>(all.size());
    Matrix block(size, size);
    for (Index i = 0; i < size; ++i)
        for (Index j = 0; j < size; ++j)
            block(i, j) = collective_element(h, all[static_cast<std::size_t>(i)].c, all[static_cast<std::size_t>(i)].photons,
                                             all[static_cast<std::size_t>(j)].c, all[static_cast<std::size_t>(j)].photons) /
                          g;

    // The symmetric Dicke sector must decouple exactly; |+,n-1> is then an
    // eigenvector with eigenvalue zero and the rest is the coupled block.
    const Index last = size - 1;
    if (block.row(last).cwiseAbs().maxCoeff() > 1e-14 || block.col(last).cwiseAbs().maxCoeff() > 1e-14)
        throw std::logic_error("manifold_spectrum: |+> sector does not decouple");

    Eigen::SelfAdjointEigenSolver<Matrix> es(block.topLeftCorner(last, last));
    struct Entry {
        double value;
        Vector vec;
        std::string label;
    };
    std::vector<Entry> entries;
    for (Index k = 0; k < last; ++k) {
        Vector v = Vector::Zero(size);
        v.head(last) = es.eigenvectors().col(k);
        // Fix the global phase: largest component real positive.
        Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        v *= std::conj(v(arg)) / std::abs(v(arg));
        const double e = es.eigenvalues()(k);
        std::string label = std::abs(e) < 1e-9 ? "Phi0" : (e < 0 ? "Psi-" : "Psi+");
        entries.push_back({e, v, label});
    }
    Vector dark_vec = Vector::Zero(size);
    dark_vec(last) = 1.0;
    entries.push_back({0.0, dark_vec, "Psi0"});
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (std::abs(a.value - b.value) > 1e-9) return a.value < b.value;
        return a.label < b.label;  // Phi0 before Psi0
    });

    ms.eigenvectors.resize(size, size);
    for (Index k = 0; k < size; ++k) {
        const auto& e = entries[static_cast<std::size_t>(k)];
        ms.eigenvalues.push_back(e.value);
        ms.eigenvectors.col(k) = e.vec;
        ms.labels.push_back(e.label);
    }

    // Closed form: +-sqrt(4n-2) and zeros.
    std::vector<double> expected{-std::sqrt(4.0 * n - 2.0), std::sqrt(4.0 * n - 2.0)};
    expected.insert(expected.begin() + 1, n >= 2 ? 2 : 1, 0.0);
    const double scale = std::sqrt(4.0 * n - 2.0);
    for (std::size_t k = 0; k < expected.size(); ++k)
        if (std::abs(ms.eigenvalues[k] - expected[k]) > 1e-10 * scale)
            throw std::logic_error("manifold_spectrum: eigenvalue " + std::to_string(ms.eigenvalues[k]) +
                                   " deviates from closed form " + std::to_string(expected[k]));
    return ms;
}

std::vector<PathwayElement> pathway_amplitudes(std::size_t n, const ModelParams& p) {
    if (!p.is_out_phase()) throw InvalidArgument("pathway_amplitudes: requires out-phase coupling (g1 = -g2)");
    if (n + 2 > p.n_max) throw InvalidArgument("pathway_amplitudes: photon index beyond truncation - 2");
    const Operator h = build_two_qubit_model(p).hamiltonian;

    struct Step {
        Collective from;
        std::size_t from_n;
        Collective to;
        std::size_t to_n;
    };
    const std::array<Step, 4> steps{{
        {Collective::GG, n, Collective::Plus, n},
        {Collective::Plus, n, Collective::EE, n},
        {Collective::EE, n, Collective::Minus, n + 1},
        {Collective::Minus, n + 1, Collective::GG, n + 2},
    }};
    std::vector<PathwayElement> out;
    for (const auto& s : steps)
        out.push_back({ket(s.from, s.from_n), ket(s.to, s.to_n), collective_element(h, s.to, s.to_n, s.from, s.from_n)});
    return out;
}

double interference_check(const ModelParams& p) {
    const Operator h = interaction_hamiltonian(p);
    return std::abs(collective_element(h, Collective::GG, 1, Collective::Plus, 0));
}

std::string dressed_report(const ModelParams& p, std::size_t max_n) {
    std::ostringstream os;
    const double g = std::abs(p.g1);
    os << "# dressed manifolds, resonant undriven out-phase coupling, g = " << fmt("%.6g", g) << "\n";
    os << "# eigenvalues in units of g\n";
    for (std::size_t n = 1; n <= max_n; ++n) {
        const auto ms = manifold_spectrum(n, g);
        os << "n=" << n << "  sqrt(4n-2)=" << fmt("%.12f", std::sqrt(4.0 * n - 2.0)) << "\n";
        os << "  basis:";
        for (const auto& b : ms.basis) os << " " << b;
        os << "\n";
        for (std::size_t k = 0; k < ms.eigenvalues.size(); ++k) {
            os << "  " << ms.labels[k] << "  E=" << fmt("%+.12f", ms.eigenvalues[k]) << "  v=(";
            for (Index j = 0; j < ms.eigenvectors.rows(); ++j)
                os << (j ? ", " : "") << fmt("%+.6f", ms.eigenvectors(j, static_cast<Index>(k)).real());
            os << ")\n";
        }
    }
    os << "# pathway elements <to|H|from> (units of gamma), eta = " << fmt("%.6g", p.eta) << "\n";
    const std::size_t last = std::min<std::size_t>(p.n_max >= 2 ? p.n_max - 2 : 0, 5);
    if (p.is_out_phase() && p.n_max >= 2) {
        for (std::size_t n = 0; n <= last; ++n)
            for (const auto& e : pathway_amplitudes(n, p))
                os << "  " << e.from << " -> " << e.to << "  " << fmt("%+.12f", e.amplitude.real())
                   << fmt("%+.3ei", e.amplitude.imag()) << "\n";
    }
    os << "# |<gg,1|H_int|+,0>| = " << fmt("%.3e", interference_check(p)) << "\n";
    return os.str();
}

}  // namespace hyperq
