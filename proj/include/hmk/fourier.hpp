// Discrete Fourier transform, biunimodular sequences and circulant Hadamard matrices.
#pragma once

#include "hmk/search.hpp"

#include <string>
#include <vector>

namespace hmk {

/// (1/sqrt N) Σ_b q^{ab} z_b with q = exp(2πi/N).
CVector dft(const CVector& z);
/// Inverse of dft.
CVector idft(const CVector& zt);

/// γ_b = (1/N) Σ_a conj(zt_a) zt_{a+b}, indices mod N.
CVector autocorrelation(const CVector& zt);

/// C_ab = zt_{(a-b) mod N} / sqrt N.
BasisMatrix circulant_from_sequence(const CVector& zt, std::string label = {});

struct BiunimodularRecord {
    PhaseVector sequence;  // z with z_0 = 1 when pinned
    CVector transform;     // dft(z)
    bool classical = false;
};

/// Sequences over the alphabet whose transform is unimodular. With fix_first the
/// first entry is pinned to 1 (one record per global phase class); otherwise every
/// alphabet multiple of a pinned record that stays inside the alphabet is listed.
std::vector<BiunimodularRecord> enumerate_biunimodular(int n, const SearchAlphabet& alphabet, bool fix_first = true,
                                                       const Tolerances& tol = {}, const ScanOptions& opts = {});

/// Throws NotCirculant unless C_ab depends on (a - b) mod N only (to 1e-10).
void require_circulant(const BasisMatrix& c);

struct Intertwiner {
    CVector diagonal;       // D with F†C = D F†
    double residual = 0.0;  // ||F†C - D F†||_max
};

/// Diagonal D = sqrt N · idft(first column of C). Throws NotCirculant or InvalidInput
/// (not Hadamard), and Error if the identity fails beyond 1e-10.
Intertwiner circulant_intertwiner(const BasisMatrix& c);

struct CensusBasis {
    BasisMatrix basis;
    std::string group;   // "i", "ii", "iii" or "iv"
    std::string family;  // catalog member it is equivalent to
    bool classical = false;
};

struct Census {
    std::vector<PhaseVector> vectors;
    std::vector<CensusBasis> bases;
    std::vector<int> vector_multiplicity;  // number of bases containing each vector
    Eigen::MatrixXd distances;
    double max_distance = 0.0;
    ScanStats vector_stats;
    ScanStats basis_stats;
};

/// Alphabet of 12th roots times powers of d used by the census.
SearchAlphabet census_alphabet();

/// Every vector unbiased to 1 and F over the census alphabet, the bases they form,
/// their groups and the pairwise distance table.
Census fourier_census(const Tolerances& tol = {}, const ScanOptions& opts = {});

}  // namespace hmk
