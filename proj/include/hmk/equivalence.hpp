// Dephasing and equivalence of Hadamard matrices under H1 = D1 P1 H2 P2 D2.
#pragma once

#include "hmk/basis.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace hmk {

/// H1(a, b) = row_phases[a] * H2(row_permutation[a], col_permutation[b]) * col_phases[b].
struct EquivalenceWitness {
    std::vector<int> row_permutation;
    std::vector<int> col_permutation;
    std::vector<cplx> row_phases;
    std::vector<cplx> col_phases;

    CMatrix apply(const CMatrix& h2) const;
    /// Witness for H2 in terms of H1.
    EquivalenceWitness inverse() const;
};

/// Rescales rows and columns so the first row and column are real positive.
BasisMatrix dephase(const BasisMatrix& h);

/// Sorted real and imaginary parts of N^2 H_ij H_kl conj(H_il) conj(H_kj) over all
/// index quadruples, each rounded to a 1e-8 grid.
///
/// Real and imaginary parts are sorted separately so that arithmetic noise never
/// reorders the lists; compare with matches(), which allows a few grid steps.
struct HaagerupInvariant {
    std::vector<std::int64_t> re;
    std::vector<std::int64_t> im;

    static HaagerupInvariant of(const BasisMatrix& h);
    bool matches(const HaagerupInvariant& other, std::int64_t slack = 100) const;
};

/// Exhaustive search for a witness. `tol` bounds the entrywise mismatch on the
/// dephased forms and on the final reconstruction.
std::optional<EquivalenceWitness> are_equivalent(const BasisMatrix& h1, const BasisMatrix& h2, double tol = 1e-9);

/// H1 ≈ H2 or H1 ≈ H2†.
bool unordered_pair_equivalent(const BasisMatrix& h1, const BasisMatrix& h2, double tol = 1e-9);

/// Images of (x1, x2) under the equivalences of the Fourier family, deduplicated.
std::vector<std::pair<PhaseValue, PhaseValue>> fourier_orbit(const PhaseValue& x1, const PhaseValue& x2);

/// Representative of the orbit inside the triangle (0,0), (1/6,0), (1/6,1/12).
/// Parameters are turns carried as phases exp(2πi x).
std::pair<PhaseValue, PhaseValue> reduce_fourier_params(const PhaseValue& x1, const PhaseValue& x2);
std::pair<TurnFraction, TurnFraction> reduce_fourier_params(TurnFraction x1, TurnFraction x2);

/// Representative of {x, x+1/2, -x+1/4, -x+3/4} in [-1/8, 1/8] (returned as a phase).
PhaseValue reduce_dita_param(const PhaseValue& x);

/// Turn of a phase mapped to (-1/2, 1/2], snapping values within 1e-12 of an integer to 0.
double signed_turn(const PhaseValue& x);

}  // namespace hmk
