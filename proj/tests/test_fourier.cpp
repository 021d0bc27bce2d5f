#include "doctest.h"
#include "support.hpp"

#include "hmk/errors.hpp"
#include "hmk/fourier.hpp"
#include "hmk/geometry.hpp"

#include <cmath>
#include <map>
#include <random>

using namespace hmk;

namespace {

CVector random_unimodular(int n, std::mt19937_64& rng) {
    CVector z(n);
    for (int i = 0; i < n; ++i) z(i) = testing::random_phase(rng);
    return z;
}

}  // namespace

TEST_CASE("dft examples") {
    const CVector ones = CVector::Ones(6);
    const CVector t = dft(ones);
    CHECK(std::abs(t(0) - std::sqrt(6.0)) < 1e-14);
    for (int i = 1; i < 6; ++i) CHECK(std::abs(t(i)) < 1e-14);
    CVector z(2);
    z << 1.0, cplx(0, 1);
    const CVector t2 = dft(z);
    CHECK(std::abs(t2(0) - cplx(1, 1) / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(t2(1) - cplx(1, -1) / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("dft round-trip") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    for (int i = 0; i < 100; ++i) {
        CVector z(6);
        for (int k = 0; k < 6; ++k) z(k) = {g(rng), g(rng)};
        CHECK((idft(dft(z)) - z).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("autocorrelation") {
    const CVector ones = CVector::Ones(6);
    const CVector g = autocorrelation(ones);
    for (int b = 0; b < 6; ++b) CHECK(std::abs(g(b) - 1.0) < 1e-14);

    std::mt19937_64 rng(2);
    const cplx q = std::polar(1.0, kTwoPi / 6);
    for (int i = 0; i < 50; ++i) {
        const CVector z = random_unimodular(6, rng);
        const CVector gamma = autocorrelation(dft(z));
        for (int b = 0; b < 6; ++b) {
            cplx s = 0;
            for (int a = 0; a < 6; ++a) s += std::norm(z(a)) * std::pow(q, a * b);
            CHECK(std::abs(gamma(b) - s / 6.0) < 1e-12);
        }
    }
}

TEST_CASE("biunimodular sequences") {
    SUBCASE("N=2 over 4th roots") {
        const auto r = enumerate_biunimodular(2, SearchAlphabet(4));
        REQUIRE(r.size() == 2);
        std::vector<cplx> second;
        for (const auto& rec : r) second.push_back(rec.sequence.entries[1].realize());
        CHECK(std::abs(second[0] - cplx(0, 1)) + std::abs(second[1] - cplx(0, -1)) < 1e-14);
    }
    SUBCASE("N=6 over 12th roots: 12, all classical") {
        const auto r = enumerate_biunimodular(6, SearchAlphabet(12));
        CHECK(r.size() == 12);
        for (const auto& rec : r) CHECK(rec.classical);
    }
    SUBCASE("N=6 over the census alphabet: 48, conjugation closed, circulant Hadamard iff biunimodular") {
        const auto r = enumerate_biunimodular(6, census_alphabet());
        REQUIRE(r.size() == 48);
        std::size_t classical = 0;
        for (const auto& rec : r) {
            classical += rec.classical ? 1 : 0;
            const CVector z = [&] {
                CVector v(6);
                for (int a = 0; a < 6; ++a) v(a) = rec.sequence.entries[static_cast<std::size_t>(a)].realize();
                return v;
            }();
            CHECK(is_hadamard(circulant_from_sequence(dft(z))));
            const CVector gamma = autocorrelation(dft(z));
            CHECK(std::abs(gamma(0) - 1.0) < 1e-10);
            for (int b = 1; b < 6; ++b) CHECK(std::abs(gamma(b)) < 1e-10);
            bool found = false;
            for (const auto& o : r) {
                bool eq = true;
                for (int a = 0; a < 6; ++a)
                    eq = eq && o.sequence.entries[static_cast<std::size_t>(a)] ==
                                   rec.sequence.entries[static_cast<std::size_t>(a)].conj();
                found = found || eq;
            }
            CHECK(found);
        }
        CHECK(classical == 12);
    }
    SUBCASE("random unimodular sequences are not biunimodular") {
        std::mt19937_64 rng(3);
        for (int i = 0; i < 20; ++i) CHECK_FALSE(is_hadamard(circulant_from_sequence(dft(random_unimodular(6, rng)))));
    }
}

TEST_CASE("N=2 circulant") {
    CVector z(2);
    z << 1.0, cplx(0, 1);
    CHECK(is_hadamard(circulant_from_sequence(dft(z))));
}

TEST_CASE("Bjorck circulant and intertwiner") {
    const BasisMatrix c = build(FamilySpec::bjorck());
    const CVector first = c.entries().col(0) * std::sqrt(6.0);
    CHECK(max_abs_diff(circulant_from_sequence(first).entries(), c.entries()) < 1e-14);
    const Intertwiner w = circulant_intertwiner(c);
    CHECK(w.residual < 1e-10);
    CHECK((dft(w.diagonal) - first).cwiseAbs().maxCoeff() < 1e-12);
    for (int a = 0; a < 6; ++a) CHECK(std::abs(std::abs(w.diagonal(a)) - 1.0) < 1e-12);

    // {1, F, C} -> {F, 1, D F†}
    const CMatrix f = fourier_entries(6);
    const BasisMatrix dfd(CMatrix(w.diagonal.asDiagonal() * f.adjoint()));
    const BasisMatrix fb(f), one = BasisMatrix::identity(6);
    CHECK(are_unbiased(one, fb));
    CHECK(are_unbiased(one, c));
    CHECK(are_unbiased(fb, c));
    CHECK(are_unbiased(fb, one));
    CHECK(are_unbiased(fb, dfd));
    CHECK(are_unbiased(one, dfd));
}

TEST_CASE("intertwiner preconditions") {
    CHECK_THROWS_AS(circulant_intertwiner(build(FamilySpec::dita(TurnFraction(0, 1)))), NotCirculant);
    CVector spike = CVector::Zero(6);
    spike(0) = std::sqrt(6.0);
    CHECK_THROWS_AS(circulant_intertwiner(circulant_from_sequence(spike)), InvalidInput);
}

TEST_CASE("census structure") {
    const Census c = fourier_census();
    CHECK(c.vectors.size() == 48);
    REQUIRE(c.bases.size() == 16);
    std::map<std::string, int> groups;
    for (const auto& b : c.bases) ++groups[b.group];
    CHECK(groups == std::map<std::string, int>{{"i", 2}, {"ii", 2}, {"iii", 6}, {"iv", 6}});
    for (int m : c.vector_multiplicity) CHECK(m == 2);
    CHECK(c.max_distance < 1.0);
    CHECK(std::abs(c.max_distance - 0.93) < 0.005);
    const BasisMatrix one = BasisMatrix::identity(6);
    const BasisMatrix f = fourier_matrix(6);
    for (const auto& b : c.bases) {
        CHECK(are_unbiased(one, b.basis));
        CHECK(are_unbiased(f, b.basis));
    }
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j) {
            const bool ci = c.bases[i].classical, cj = c.bases[j].classical;
            if (ci != cj) CHECK(std::abs(c.distances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - 0.92) < 0.005);
            const std::string gi = c.bases[i].group, gj = c.bases[j].group;
            if ((gi == "iii" && gj == "iv") || (gi == "iv" && gj == "iii"))
                CHECK(std::abs(c.distances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - 0.74) < 0.005);
        }
}
