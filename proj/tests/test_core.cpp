#include "doctest.h"
#include "support.hpp"

#include "hmk/errors.hpp"

#include <cmath>
#include <random>

using namespace hmk;

TEST_CASE("turn fractions normalize") {
    const TurnFraction a(7, 12);
    CHECK(a.num() == 7);
    CHECK(a.den() == 12);
    const TurnFraction b(-1, 4);
    CHECK(b.num() == 3);
    CHECK(b.den() == 4);
    const TurnFraction c(6, 8);
    CHECK(c == TurnFraction(3, 4));
    CHECK(TurnFraction(5, 5) == TurnFraction(0, 1));
    CHECK(TurnFraction(0, 7).str() == "0");
    CHECK(TurnFraction::parse("-1/8") == TurnFraction(7, 8));
    CHECK_THROWS(TurnFraction(1, 0));
}

TEST_CASE("realize at named points") {
    CHECK(std::abs(PhaseValue::root(0, 1).realize() - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(PhaseValue::root(3, 12).realize() - cplx(0, 1)) < 1e-15);
    const cplx d = PhaseValue::special(Special::d).realize();
    CHECK(std::abs(d - cplx((1 - std::sqrt(3.0)) / 2, std::sqrt(std::sqrt(3.0) / 2))) < 1e-14);
}

TEST_CASE("special constants satisfy their defining relations") {
    const cplx d = special_value(Special::d);
    CHECK(std::abs(std::abs(d) - 1.0) < 1e-14);
    CHECK(std::abs(d * d - (1 - std::sqrt(3.0)) * d + 1.0) < 1e-13);
    const double c1 = special_turn(Special::b1);
    CHECK(std::abs(std::cos(kTwoPi * c1) - std::sqrt(2.0 / 3.0)) < 1e-13);
    CHECK(c1 > 0.0);
    CHECK(c1 < 0.25);
    const double c2 = special_turn(Special::b2);
    CHECK(std::abs(std::tan(kTwoPi * c2) + 2.0) < 1e-12);
    CHECK(c2 > 0.25);
    CHECK(c2 < 0.5);
    CHECK(std::abs(PhaseValue::special(Special::d, -1).realize() - std::conj(d)) < 1e-14);
}

TEST_CASE("realize is multiplicative on turn addition") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> den(1, 48);
    for (int i = 0; i < 200; ++i) {
        const int n1 = den(rng), n2 = den(rng);
        std::uniform_int_distribution<int> k1(0, n1 - 1), k2(0, n2 - 1);
        const TurnFraction a(k1(rng), n1), b(k2(rng), n2);
        CHECK(std::abs(a.realize() * b.realize() - (a + b).realize()) < 1e-13);
        CHECK(std::abs(std::abs(a.realize()) - 1.0) < 1e-13);
    }
}

TEST_CASE("phase products and equality") {
    const PhaseValue a = PhaseValue::root(1, 6);
    const PhaseValue b = PhaseValue::root(1, 3);
    CHECK(a * b == PhaseValue::root(1, 2));
    CHECK((a * a.conj()) == PhaseValue::one());
    const PhaseValue s = PhaseValue::special(Special::b2, 1, TurnFraction(3, 8));
    CHECK(s.is_exact());
    CHECK(std::abs((s * s.conj()).realize() - cplx(1, 0)) < 1e-14);
    CHECK(PhaseValue::from_angle(0.5) == PhaseValue::from_angle(0.5 + kTwoPi));
    CHECK_FALSE(PhaseValue::root(1, 6) == PhaseValue::root(1, 12));
}

TEST_CASE("turn labels round-trip") {
    const std::vector<PhaseValue> values{
        PhaseValue::one(),
        PhaseValue::root(1, 6),
        PhaseValue::root(17, 24),
        PhaseValue::special(Special::b2, 1, TurnFraction(3, 8)),
        PhaseValue::special(Special::b1, -1, TurnFraction(1, 8)),
        PhaseValue::special(Special::b1, 2),
        PhaseValue::special(Special::d, -1),
        PhaseValue::special(Special::d, 2, TurnFraction(5, 12)),
    };
    for (const auto& v : values) {
        INFO(v.turn_label());
        CHECK(PhaseValue::parse_turn_label(v.turn_label()) == v);
    }
    const PhaseValue f = PhaseValue::parse_turn_label("0.25");
    CHECK_FALSE(f.is_exact());
    CHECK(std::abs(f.realize() - cplx(0, 1)) < 1e-15);
    CHECK_THROWS_AS(PhaseValue::parse_turn_label("x/3"), ParseError);
    CHECK_THROWS_AS(PhaseValue::parse_turn_label(""), ParseError);
    CHECK_THROWS_AS(PhaseValue::parse_turn_label("1/6+c9"), ParseError);
}

TEST_CASE("is_hadamard examples") {
    CHECK_FALSE(is_hadamard(BasisMatrix::identity(6)));
    const BasisMatrix f = fourier_matrix(6);
    CHECK(is_hadamard(f));
    CHECK(hadamard_residual(f) < 1e-12);
    CMatrix broken = f.entries();
    broken(2, 3) = 0.0;
    CHECK_FALSE(is_hadamard(BasisMatrix(broken)));
}

TEST_CASE("are_unbiased examples and symmetry") {
    const BasisMatrix one = BasisMatrix::identity(6);
    const BasisMatrix f = fourier_matrix(6);
    CHECK(are_unbiased(one, f));
    CHECK(are_unbiased(f, one));
    CHECK_FALSE(are_unbiased(one, one));
    std::mt19937_64 rng(3);
    CHECK_FALSE(are_unbiased(f, testing::rephase_columns(f, rng)));
    for (int i = 0; i < 20; ++i) {
        const BasisMatrix a = testing::scramble(f, rng);
        const BasisMatrix b = testing::scramble(testing::dita_at(0.1), rng);
        CHECK(are_unbiased(a, b) == are_unbiased(b, a));
    }
}

TEST_CASE("tolerances must be positive") {
    Tolerances t;
    CHECK_NOTHROW(t.validate());
    t.unbiasedness = 0.0;
    CHECK_THROWS_AS(t.validate(), InvalidInput);
    Tolerances u;
    u.unitarity = -1.0;
    CHECK_THROWS_AS(u.validate(), InvalidInput);
}

TEST_CASE("validate rejects non-unitary matrices and grid mismatches") {
    CMatrix m = CMatrix::Identity(6, 6);
    m(0, 0) = 2.0;
    CHECK_THROWS_AS(BasisMatrix(m).validate(), ValidationError);
    CHECK_NOTHROW(fourier_matrix(6).validate());
    CHECK(fourier_matrix(6).exact_mismatch() < 1e-12);
}
