#include "hmk/fourier.hpp"

#include "hmk/equivalence.hpp"
#include "hmk/errors.hpp"
#include "hmk/geometry.hpp"

#include <cmath>

namespace hmk {

CVector dft(const CVector& z) {
    const auto n = z.size();
    CVector out = CVector::Zero(n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (Eigen::Index a = 0; a < n; ++a) {
        cplx acc{0.0, 0.0};
        for (Eigen::Index b = 0; b < n; ++b) acc += unit_turn(a * b, n) * z(b);
        out(a) = s * acc;
    }
    return out;
}

CVector idft(const CVector& zt) {
    const auto n = zt.size();
    CVector out = CVector::Zero(n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (Eigen::Index b = 0; b < n; ++b) {
        cplx acc{0.0, 0.0};
        for (Eigen::Index a = 0; a < n; ++a) acc += unit_turn(-a * b, n) * zt(a);
        out(b) = s * acc;
    }
    return out;
}

CVector autocorrelation(const CVector& zt) {
    const auto n = zt.size();
    CVector g = CVector::Zero(n);
    for (Eigen::Index b = 0; b < n; ++b) {
        cplx acc{0.0, 0.0};
        for (Eigen::Index a = 0; a < n; ++a) acc += std::conj(zt(a)) * zt((a + b) % n);
        g(b) = acc / static_cast<double>(n);
    }
    return g;
}

BasisMatrix circulant_from_sequence(const CVector& zt, std::string label) {
    const auto n = zt.size();
    if (n < 1) throw InvalidInput("circulant_from_sequence: empty sequence");
    CMatrix c(n, n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) c(a, b) = s * zt(((a - b) % n + n) % n);
    return BasisMatrix(std::move(c), std::move(label));
}

std::vector<BiunimodularRecord> enumerate_biunimodular(int n, const SearchAlphabet& alphabet, bool fix_first,
                                                       const Tolerances& tol, const ScanOptions& opts) {
    if (n < 1) throw InvalidInput("enumerate_biunimodular: N must be positive");
    // |dft(z)_a|^2 = 1  <=>  |Σ_b q^{ab} z_b|^2 = N
    std::vector<VectorConstraint> constraints;
    for (int a = 0; a < n; ++a) {
        VectorConstraint c;
        c.target = n;
        for (int b = 0; b < n; ++b) c.coeffs.push_back(unit_turn(static_cast<std::int64_t>(a) * b, n));
        constraints.push_back(std::move(c));
    }
    const auto pinned = scan_vectors(n, alphabet, constraints, tol.unbiasedness, opts);

    const auto make = [](PhaseVector v) {
        BiunimodularRecord r;
        CVector z(static_cast<Eigen::Index>(v.entries.size()));
        r.classical = true;
        for (std::size_t i = 0; i < v.entries.size(); ++i) {
            z(static_cast<Eigen::Index>(i)) = v.entries[i].realize();
            r.classical = r.classical && v.entries[i].is_rational_root();
        }
        r.transform = dft(z);
        r.sequence = std::move(v);
        return r;
    };

    std::vector<BiunimodularRecord> out;
    if (fix_first) {
        for (const auto& v : pinned) out.push_back(make(v));
        return out;
    }
    std::vector<int> hits;
    for (std::size_t s = 0; s < alphabet.size(); ++s)
        for (const auto& v : pinned) {
            PhaseVector w;
            bool inside = true;
            for (int idx : v.symbols) {
                alphabet.lookup(alphabet.values()[s] * alphabet.values()[static_cast<std::size_t>(idx)], 1e-9, hits);
                if (hits.size() != 1) {
                    inside = false;
                    break;
                }
                w.symbols.push_back(hits.front());
                w.entries.push_back(alphabet.symbols()[static_cast<std::size_t>(hits.front())]);
            }
            if (inside) out.push_back(make(std::move(w)));
        }
    return out;
}

void require_circulant(const BasisMatrix& c) {
    const int n = c.dimension();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (std::abs(c(a, b) - c(((a - b) % n + n) % n, 0)) > 1e-10)
                throw NotCirculant("matrix entry (" + std::to_string(a) + "," + std::to_string(b) +
                                   ") breaks the (a-b) mod N pattern");
}

Intertwiner circulant_intertwiner(const BasisMatrix& c) {
    require_circulant(c);
    if (!is_hadamard(c)) throw InvalidInput("circulant_intertwiner: matrix is not Hadamard");
    const int n = c.dimension();
    const CMatrix f = fourier_entries(n);
    Intertwiner out;
    out.diagonal = std::sqrt(static_cast<double>(n)) * idft(c.entries().col(0));
    const CMatrix lhs = f.adjoint() * c.entries();
    const CMatrix rhs = out.diagonal.asDiagonal() * f.adjoint();
    out.residual = max_abs_diff(lhs, rhs);
    if (out.residual > 1e-10) throw Error("F†C = D F† fails for a circulant matrix");
    return out;
}

SearchAlphabet census_alphabet() { return SearchAlphabet(12, {Special::d}, 2); }

Census fourier_census(const Tolerances& tol, const ScanOptions& opts) {
    const SearchAlphabet alphabet = census_alphabet();
    Census census;
    const BasisMatrix f = fourier_matrix(6);
    census.vectors = enumerate_unbiased_vectors({BasisMatrix::identity(6), f}, alphabet, tol, opts, &census.vector_stats);
    const auto bases = assemble_bases(census.vectors, tol, &census.basis_stats);

    const BasisMatrix f00 = build(FamilySpec::fourier(TurnFraction(0, 1), TurnFraction(0, 1)));
    const BasisMatrix ft16 = build(FamilySpec::fourier_transposed(TurnFraction(1, 6), TurnFraction(0, 1)));
    const BasisMatrix c = build(FamilySpec::bjorck());
    const BasisMatrix cbar = build(FamilySpec::bjorck_conjugate());
    for (const auto& b : bases) {
        CensusBasis cb;
        cb.basis = b;
        cb.classical = std::all_of(b.exact()->cells.begin(), b.exact()->cells.end(),
                                   [](const PhaseValue& p) { return p.is_rational_root(); });
        if (are_equivalent(b, f00)) {
            cb.family = "F(0,0)";
            cb.group = cb.classical ? "i" : "iv";
        } else if (are_equivalent(b, ft16)) {
            cb.family = "FT(1/6,0)";
            cb.group = cb.classical ? "ii" : "?";
        } else if (are_equivalent(b, c)) {
            cb.family = "C";
            cb.group = cb.classical ? "?" : "iii";
        } else if (are_equivalent(b, cbar)) {
            cb.family = "Cbar";
            cb.group = cb.classical ? "?" : "iii";
        } else {
            cb.family = "?";
            cb.group = "?";
        }
        census.bases.push_back(std::move(cb));
    }

    census.vector_multiplicity.assign(census.vectors.size(), 0);
    for (const auto& cb : census.bases) {
        const PhaseGrid& g = *cb.basis.exact();
        for (int col = 0; col < g.dim; ++col)
            for (std::size_t v = 0; v < census.vectors.size(); ++v) {
                bool same = true;
                for (int r = 0; r < g.dim && same; ++r) same = g.at(r, col) == census.vectors[v].entries[static_cast<std::size_t>(r)];
                if (same) ++census.vector_multiplicity[v];
            }
    }

    const auto k = static_cast<Eigen::Index>(census.bases.size());
    census.distances = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i + 1; j < k; ++j) {
            const double d = chordal_distance_sq(census.bases[static_cast<std::size_t>(i)].basis,
                                                 census.bases[static_cast<std::size_t>(j)].basis);
            census.distances(i, j) = census.distances(j, i) = d;
            census.max_distance = std::max(census.max_distance, d);
        }
    return census;
}

}  // namespace hmk
