#include "doctest.h"
#include "support.hpp"

#include "hmk/equivalence.hpp"

#include <cmath>
#include <random>

using namespace hmk;
using testing::dita_at;
using testing::fourier_at;

namespace {

double reconstruction(const EquivalenceWitness& w, const BasisMatrix& h1, const BasisMatrix& h2) {
    return max_abs_diff(w.apply(h2.entries()), h1.entries());
}

bool in_triangle(double x1, double x2) {
    const double e = 1e-12;
    return x2 >= -e && x1 <= 1.0 / 6 + e && x2 <= x1 / 2 + e;
}

}  // namespace

TEST_CASE("dephase") {
    const BasisMatrix f = fourier_at(0, 0);
    CHECK(max_abs_diff(dephase(f).entries(), f.entries()) < 1e-14);
    CMatrix m = f.entries();
    m.col(1) *= cplx(0, 1);
    CHECK(max_abs_diff(dephase(BasisMatrix(m)).entries(), f.entries()) < 1e-14);
    const BasisMatrix c = dephase(build(FamilySpec::bjorck()));
    for (int k = 0; k < 6; ++k) {
        CHECK(std::abs(c(0, k) - 1.0 / std::sqrt(6.0)) < 1e-12);
        CHECK(std::abs(c(k, 0) - 1.0 / std::sqrt(6.0)) < 1e-12);
    }
    CHECK(is_hadamard(c));
}

TEST_CASE("witnesses for random enphased and permuted variants") {
    std::mt19937_64 rng(21);
    const std::vector<BasisMatrix> seeds{fourier_at(0.03, 0.11), dita_at(0.07), build(FamilySpec::bjorck()), tao(),
                                         build(FamilySpec::hermitian(2.2))};
    for (int i = 0; i < 40; ++i) {
        const BasisMatrix& h = seeds[static_cast<std::size_t>(i) % seeds.size()];
        const BasisMatrix v = testing::scramble(h, rng);
        const auto w = are_equivalent(v, h);
        REQUIRE(w);
        CHECK(reconstruction(*w, v, h) < 1e-9);
        const auto back = w->inverse();
        CHECK(reconstruction(back, h, v) < 1e-9);
        CHECK(HaagerupInvariant::of(v).matches(HaagerupInvariant::of(h)));
    }
}

TEST_CASE("Haagerup invariant agrees whenever a witness exists") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const BasisMatrix h = i % 2 ? fourier_at(u(rng), u(rng)) : dita_at(u(rng));
        const BasisMatrix v = testing::scramble(h, rng);
        if (are_equivalent(h, v)) CHECK(HaagerupInvariant::of(h).matches(HaagerupInvariant::of(v)));
    }
}

TEST_CASE("named equivalences") {
    const double x1 = 0.043, x2 = 0.131;
    CHECK(are_equivalent(fourier_at(x1, x2), fourier_at(x2, x1)));
    CHECK(are_equivalent(dita_at(0.05), dita_at(0.55)));
    CHECK(are_equivalent(dita_at(0.05), dita_at(0.2)));
    CHECK_FALSE(are_equivalent(fourier_at(0, 0), tao()));
}

TEST_CASE("reflexive and symmetric") {
    std::mt19937_64 rng(9);
    const BasisMatrix a = fourier_at(0.09, 0.02);
    CHECK(are_equivalent(a, a));
    const BasisMatrix b = testing::scramble(a, rng);
    CHECK(are_equivalent(a, b).has_value() == are_equivalent(b, a).has_value());
}

TEST_CASE("dagger relations") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const double x = u(rng) - 0.5;
        CHECK(are_equivalent(dita_at(x).adjoint(), dita_at(-x)));
    }
    const BasisMatrix f = fourier_at(0.07, 0.03);
    const BasisMatrix ft = build(FamilySpec::fourier_transposed(PhaseValue::from_turn(0.07), PhaseValue::from_turn(0.03)));
    CHECK(unordered_pair_equivalent(f, ft));
    const BasisMatrix c = build(FamilySpec::bjorck());
    CHECK(unordered_pair_equivalent(c, c));
    CHECK(are_equivalent(c.adjoint(), c));
    CHECK_FALSE(unordered_pair_equivalent(fourier_at(0, 0), tao()));
}

TEST_CASE("inequivalent members of one family") {
    CHECK_FALSE(are_equivalent(fourier_at(0, 0), fourier_at(1.0 / 6, 0)));
    CHECK_FALSE(are_equivalent(dita_at(0), dita_at(0.1)));
}

TEST_CASE("Fourier fundamental region") {
    SUBCASE("corners and translations") {
        const auto [a, b] = reduce_fourier_params(TurnFraction(0, 1), TurnFraction(0, 1));
        CHECK(a == TurnFraction(0, 1));
        CHECK(b == TurnFraction(0, 1));
        std::mt19937_64 rng(2);
        std::uniform_int_distribution<int> k(0, 47);
        for (int i = 0; i < 50; ++i) {
            const TurnFraction x1(k(rng), 48), x2(k(rng), 48);
            const auto r0 = reduce_fourier_params(x1, x2);
            const auto r1 = reduce_fourier_params(x1 + TurnFraction(2, 6), x2 + TurnFraction(1, 6));
            CHECK(r0 == r1);
            CHECK(in_triangle(r0.first.value(), r0.second.value()));
        }
    }
    SUBCASE("representative is equivalent to the input") {
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 15; ++i) {
            const double x1 = u(rng), x2 = u(rng);
            const auto [r1, r2] = reduce_fourier_params(PhaseValue::from_turn(x1), PhaseValue::from_turn(x2));
            CHECK(in_triangle(signed_turn(r1), signed_turn(r2)));
            CHECK(are_equivalent(fourier_at(x1, x2), build(FamilySpec::fourier(r1, r2))));
        }
    }
    SUBCASE("orbit sizes") {
        CHECK(fourier_orbit(PhaseValue::from_turn(0.0317), PhaseValue::from_turn(0.0121)).size() == 144);
        for (int den = 1; den <= 24; ++den)
            for (int a = 0; a < den; a += 5)
                for (int b = 0; b < den; b += 7) {
                    const auto orbit = fourier_orbit(PhaseValue::root(a, den), PhaseValue::root(b, den));
                    CHECK(144 % orbit.size() == 0);
                }
    }
    SUBCASE("Dita parameter") {
        const double r = signed_turn(reduce_dita_param(PhaseValue::from_turn(0.3)));
        CHECK(r >= -0.125 - 1e-12);
        CHECK(r <= 0.125 + 1e-12);
        CHECK(are_equivalent(dita_at(0.3), dita_at(r)));
    }
}
