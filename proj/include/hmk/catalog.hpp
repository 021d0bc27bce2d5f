// Constructors for the known complex Hadamard matrices of order 6.
#pragma once

#include "hmk/basis.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hmk {

enum class Family {
    Fourier,
    FourierTransposed,
    Bjorck,
    BjorckConjugate,
    Dita,
    Hermitian,
    Tao,
    TwistedFourier,
    DitaBlockCirculant,
};

/// Family plus parameters.
///
/// Affine parameters are carried as phases z = exp(2πi x), so a rational x keeps
/// its exact form. Hermitian takes theta (radians) and a square-root branch.
/// TwistedFourier takes the diagonal of D, either (z1, z2) for diag(1, z1, z2)
/// or all three entries. DitaBlockCirculant takes a selector: 0 is the
/// block-circulant form of D(0) built from C3, C4; 1..4 are the four
/// block matrices assembled from the 24th-root circulants C1, C2.
struct FamilySpec {
    Family family = Family::Fourier;
    std::vector<PhaseValue> phases;
    std::optional<double> theta;
    int branch = +1;
    int selector = 0;

    static FamilySpec fourier(PhaseValue z1, PhaseValue z2) { return make(Family::Fourier, {z1, z2}); }
    static FamilySpec fourier_transposed(PhaseValue z1, PhaseValue z2) {
        return make(Family::FourierTransposed, {z1, z2});
    }
    static FamilySpec fourier(TurnFraction x1, TurnFraction x2) {
        return fourier(PhaseValue(RationalRoot{x1}), PhaseValue(RationalRoot{x2}));
    }
    static FamilySpec fourier_transposed(TurnFraction x1, TurnFraction x2) {
        return fourier_transposed(PhaseValue(RationalRoot{x1}), PhaseValue(RationalRoot{x2}));
    }
    static FamilySpec dita(PhaseValue z) { return make(Family::Dita, {z}); }
    static FamilySpec dita(TurnFraction x) { return dita(PhaseValue(RationalRoot{x})); }
    static FamilySpec bjorck() { return make(Family::Bjorck, {}); }
    static FamilySpec bjorck_conjugate() { return make(Family::BjorckConjugate, {}); }
    static FamilySpec hermitian(double theta, int branch = +1) {
        FamilySpec s = make(Family::Hermitian, {});
        s.theta = theta;
        s.branch = branch;
        return s;
    }
    static FamilySpec tao() { return make(Family::Tao, {}); }
    static FamilySpec twisted_fourier(std::vector<PhaseValue> diagonal) {
        return make(Family::TwistedFourier, std::move(diagonal));
    }
    static FamilySpec dita_block_circulant(int selector) {
        FamilySpec s = make(Family::DitaBlockCirculant, {});
        s.selector = selector;
        return s;
    }

    static FamilySpec make(Family f, std::vector<PhaseValue> phases) {
        FamilySpec s;
        s.family = f;
        s.phases = std::move(phases);
        return s;
    }

    /// Short name such as "F(1/6,1/12)", "FT(3/8+c2,0)", "D(1/8)", "B(2.5,+)", "C".
    std::string label() const;
};

std::string family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

struct FamilyInfo {
    Family family;
    std::string name;
    std::string arity;  // human readable parameter description
};
const std::vector<FamilyInfo>& family_list();

/// Builds the 6×6 matrix for the spec (normalized by 1/sqrt 6).
/// Throws BadArity on a wrong parameter count and OutOfRange for an inadmissible theta.
BasisMatrix build(const FamilySpec& spec);

/// cos(theta) <= (sqrt3 - 1)/2 up to 1e-12.
bool hermitian_admissible(double theta);

/// Hermitian family member for a given unimodular y = exp(i theta).
BasisMatrix hermitian_from_y(cplx y, int branch = +1);

/// Tao's matrix: the first dephased Hadamard matrix over cube roots of unity found
/// by the clique search. Computed once per process.
const BasisMatrix& tao();

/// Seeds tao() from a stored copy. Returns false (and ignores it) unless the matrix
/// is a 6×6 Hadamard matrix with an exact grid of cube roots of unity.
bool install_tao(const BasisMatrix& m);

/// Order-N Fourier matrix q^{ab}/sqrt N, exact.
BasisMatrix fourier_matrix(int n);

/// (1/sqrt N) q^{ab} with q = exp(2πi/N), as a plain complex matrix.
CMatrix fourier_entries(int n);

}  // namespace hmk
