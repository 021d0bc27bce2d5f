#include "doctest.h"
#include "support.hpp"

#include "hmk/equivalence.hpp"
#include "hmk/errors.hpp"

#include <cmath>
#include <random>

using namespace hmk;
using testing::fourier_at;

namespace {

const double kBoundary = std::acos((std::sqrt(3.0) - 1.0) / 2.0);

double hermitian_deviation(const BasisMatrix& b) { return max_abs_diff(b.entries(), b.entries().adjoint()); }

}  // namespace

TEST_CASE("Fourier(0,0) is the order-6 Fourier matrix") {
    const BasisMatrix f = build(FamilySpec::fourier(TurnFraction(0, 1), TurnFraction(0, 1)));
    const cplx q = std::polar(1.0, kPi / 3);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) CHECK(std::abs(f(a, b) - std::pow(q, a * b) / std::sqrt(6.0)) < 1e-14);
    REQUIRE(f.exact());
    CHECK(f.exact_mismatch() < 1e-12);
}

TEST_CASE("Dita(0) has fourth-root entries") {
    const BasisMatrix d = build(FamilySpec::dita(TurnFraction(0, 1)));
    REQUIRE(d.exact());
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            const cplx z = d(a, b) * std::sqrt(6.0);
            CHECK(std::abs(std::pow(z, 4) - cplx(1, 0)) < 1e-12);
        }
    CHECK(is_hadamard(d));
}

TEST_CASE("Fourier families are Hadamard at rational points with denominator up to 48") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> den(1, 48);
    for (int i = 0; i < 150; ++i) {
        const int n1 = den(rng), n2 = den(rng);
        std::uniform_int_distribution<int> k1(0, n1 - 1), k2(0, n2 - 1);
        const TurnFraction x1(k1(rng), n1), x2(k2(rng), n2);
        const BasisMatrix f = build(FamilySpec::fourier(x1, x2));
        const BasisMatrix ft = build(FamilySpec::fourier_transposed(x1, x2));
        CHECK(hadamard_residual(f) < 1e-12);
        CHECK(hadamard_residual(ft) < 1e-12);
    }
}

TEST_CASE("every catalog member is Hadamard") {
    const std::vector<FamilySpec> specs{
        FamilySpec::bjorck(),
        FamilySpec::bjorck_conjugate(),
        FamilySpec::dita(TurnFraction(1, 8)),
        FamilySpec::hermitian(2.5, +1),
        FamilySpec::hermitian(2.5, -1),
        FamilySpec::tao(),
        FamilySpec::twisted_fourier({PhaseValue::special(Special::b2, 1, TurnFraction(9, 24)), PhaseValue::one(),
                                     PhaseValue::one()}),
        FamilySpec::dita_block_circulant(0),
        FamilySpec::dita_block_circulant(1),
        FamilySpec::dita_block_circulant(2),
        FamilySpec::dita_block_circulant(3),
        FamilySpec::dita_block_circulant(4),
    };
    for (const auto& s : specs) {
        INFO(s.label());
        CHECK(hadamard_residual(build(s)) < 1e-12);
    }
}

TEST_CASE("Bjorck matrix is circulant") {
    const BasisMatrix c = build(FamilySpec::bjorck());
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) CHECK(std::abs(c(a, b) - c((a + 1) % 6, (b + 1) % 6)) < 1e-14);
}

TEST_CASE("Hermitian family") {
    SUBCASE("Hermitian across sampled admissible angles") {
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> th(kBoundary, kTwoPi - kBoundary);
        for (int i = 0; i < 100; ++i) {
            const BasisMatrix b = build(FamilySpec::hermitian(th(rng), i % 2 ? -1 : +1));
            CHECK(hermitian_deviation(b) < 1e-10);
            CHECK(is_hadamard(b));
        }
    }
    SUBCASE("boundary: vanishing square root, branches coincide, equivalent to C or its conjugate") {
        const BasisMatrix plus = build(FamilySpec::hermitian(kBoundary, +1));
        const BasisMatrix minus = build(FamilySpec::hermitian(kBoundary, -1));
        CHECK(max_abs_diff(plus.entries(), minus.entries()) < 1e-6);
        CHECK(is_hadamard(plus));
        const BasisMatrix c = build(FamilySpec::bjorck());
        const bool to_c = are_equivalent(plus, c).has_value() || are_equivalent(plus, c.conjugate()).has_value();
        CHECK(to_c);
    }
    SUBCASE("both branches equivalent") {
        for (double th : {1.7, 2.4, 3.0, 4.1}) {
            CHECK(are_equivalent(build(FamilySpec::hermitian(th, +1)), build(FamilySpec::hermitian(th, -1))).has_value());
        }
    }
    SUBCASE("admissibility") {
        CHECK(hermitian_admissible(kPi));
        CHECK_FALSE(hermitian_admissible(0.0));
        CHECK(hermitian_admissible(kBoundary));
        CHECK_THROWS_AS(build(FamilySpec::hermitian(0.3)), OutOfRange);
    }
}

TEST_CASE("arity errors") {
    CHECK_THROWS_AS(build(FamilySpec::make(Family::Fourier, {PhaseValue::one()})), BadArity);
    CHECK_THROWS_AS(build(FamilySpec::make(Family::Dita, {})), BadArity);
    CHECK_THROWS_AS(build(FamilySpec::make(Family::Bjorck, {PhaseValue::one()})), BadArity);
    CHECK_THROWS_AS(build(FamilySpec::make(Family::TwistedFourier, {PhaseValue::one()})), BadArity);
    FamilySpec h = FamilySpec::make(Family::Hermitian, {});
    CHECK_THROWS_AS(build(h), BadArity);
    CHECK_THROWS(build(FamilySpec::dita_block_circulant(7)));
}

TEST_CASE("Tao matrix: cube roots, defect-free class distinct from Fourier") {
    const BasisMatrix& s = tao();
    CHECK(is_hadamard(s));
    const BasisMatrix ds = dephase(s);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            const cplx z = ds(a, b) * std::sqrt(6.0);
            CHECK(std::abs(z * z * z - cplx(1, 0)) < 1e-10);
        }
    CHECK_FALSE(are_equivalent(s, fourier_at(0, 0)).has_value());
}

TEST_CASE("install_tao rejects matrices off the cube-root grid") {
    CHECK_FALSE(install_tao(fourier_at(0, 0)));
    CHECK_FALSE(install_tao(build(FamilySpec::dita(TurnFraction(0, 1)))));
    CHECK(install_tao(tao()));
}

TEST_CASE("family names round-trip") {
    for (const auto& f : family_list()) {
        const auto back = family_from_name(f.name);
        REQUIRE(back);
        CHECK(*back == f.family);
        CHECK(family_name(f.family) == f.name);
    }
    CHECK_FALSE(family_from_name("haagerup"));
}

TEST_CASE("labels") {
    CHECK(FamilySpec::fourier(TurnFraction(1, 6), TurnFraction(1, 12)).label() == "F(1/6,1/12)");
    CHECK(FamilySpec::dita(TurnFraction(1, 8)).label() == "D(1/8)");
    CHECK(FamilySpec::bjorck().label() == "C");
}
