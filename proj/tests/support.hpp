// Shared helpers for the unit tests: seeded generators and small builders.
#pragma once

#include "hmk/basis.hpp"
#include "hmk/catalog.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace hmk::testing {

inline BasisMatrix fourier_at(double x1, double x2) {
    return build(FamilySpec::fourier(PhaseValue::from_turn(x1), PhaseValue::from_turn(x2)));
}

inline BasisMatrix dita_at(double x) { return build(FamilySpec::dita(PhaseValue::from_turn(x))); }

inline std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

inline cplx random_phase(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    return std::polar(1.0, u(rng));
}

/// D1 P1 h P2 D2 with random permutations and phases.
inline BasisMatrix scramble(const BasisMatrix& h, std::mt19937_64& rng) {
    const int n = h.dimension();
    const auto rp = random_permutation(n, rng);
    const auto cp = random_permutation(n, rng);
    std::vector<cplx> rd, cd;
    for (int i = 0; i < n; ++i) rd.push_back(random_phase(rng));
    for (int i = 0; i < n; ++i) cd.push_back(random_phase(rng));
    CMatrix out(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            out(a, b) = rd[static_cast<std::size_t>(a)] * h(rp[static_cast<std::size_t>(a)], cp[static_cast<std::size_t>(b)]) *
                        cd[static_cast<std::size_t>(b)];
    return BasisMatrix(out);
}

/// Columns rephased by random unit scalars.
inline BasisMatrix rephase_columns(const BasisMatrix& h, std::mt19937_64& rng) {
    CMatrix out = h.entries();
    for (int b = 0; b < h.dimension(); ++b) out.col(b) *= random_phase(rng);
    return BasisMatrix(out);
}

}  // namespace hmk::testing
