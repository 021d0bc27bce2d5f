#include "doctest.h"
#include "support.hpp"

#include "hmk/defect.hpp"
#include "hmk/equivalence.hpp"
#include "hmk/errors.hpp"

#include <cmath>
#include <random>

using namespace hmk;

namespace {

ExpansionSeed random_seed(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("defect values") {
    CHECK(defect(build(FamilySpec::fourier(TurnFraction(0, 1), TurnFraction(0, 1)))) == 4);
    CHECK(defect(build(FamilySpec::bjorck())) == 4);
    CHECK(defect(build(FamilySpec::dita(TurnFraction(0, 1)))) == 4);
    CHECK(defect(tao()) == 0);
}

TEST_CASE("defect of the Hermitian family at sampled angles") {
    const double lo = std::acos((std::sqrt(3.0) - 1.0) / 2.0);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> th(lo, kTwoPi - lo);
    for (int i = 0; i < 30; ++i) CHECK(defect(build(FamilySpec::hermitian(th(rng), i % 2 ? -1 : +1))) == 4);
}

TEST_CASE("defect is invariant under equivalence") {
    std::mt19937_64 rng(5);
    const std::vector<BasisMatrix> ms{build(FamilySpec::fourier(TurnFraction(0, 1), TurnFraction(0, 1))),
                                      build(FamilySpec::bjorck()), build(FamilySpec::dita(TurnFraction(0, 1))), tao()};
    for (const auto& m : ms) {
        const int d = defect(m);
        for (int i = 0; i < 20; ++i) CHECK(defect(testing::scramble(m, rng)) == d);
    }
}

TEST_CASE("defect errors") {
    CHECK_THROWS_AS(defect(BasisMatrix::identity(6)), InvalidInput);
}

TEST_CASE("Jacobian shape and kernel at D(0)") {
    const BasisMatrix d = dephase(build(FamilySpec::dita(TurnFraction(0, 1))));
    const Eigen::MatrixXd j = unitarity_jacobian(d.entries());
    CHECK(j.rows() == 2 * 15 + 6);
    CHECK(j.cols() == 25);
    // first-order phases of any seed lie in the kernel
    std::mt19937_64 rng(6);
    for (int i = 0; i < 10; ++i) {
        const PhasePerturbation p = first_order_phases(random_seed(rng, 0.3));
        Eigen::VectorXd v(25);
        for (int a = 0; a < 5; ++a)
            for (int b = 0; b < 5; ++b) v(a * 5 + b) = p.x(a, b);
        CHECK((j * v).cwiseAbs().maxCoeff() < 1e-12);
    }
    const DefectAnalysis an = defect_analysis(d);
    CHECK(an.rank == 21);
    CHECK(an.defect == 4);
}

TEST_CASE("perturbation decomposition is exact") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    Eigen::MatrixXd x(5, 5);
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) x(a, b) = g(rng);
    const PhasePerturbation p(x);
    CHECK((p.diagonal() + p.symmetric() + p.antisymmetric() - x).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(p.at(1, 2) == x(0, 1));
}

TEST_CASE("zero seed leaves D(0) unchanged") {
    const ExpansionReport r = dita_expand({0, 0, 0, 0}, 3);
    for (const auto& s : r.stages) CHECK(s.solution.x.cwiseAbs().maxCoeff() < 1e-15);
    const CMatrix d0 = dephase(build(FamilySpec::dita(TurnFraction(0, 1)))).entries();
    CHECK(max_abs_diff(r.matrix(), d0) < 1e-15);
}

TEST_CASE("expansion is consistent for random small seeds") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        const ExpansionReport r = dita_expand(random_seed(rng, 0.1), 3);
        CHECK(r.consistent);
        for (const auto& s : r.stages) CHECK(s.residual < 1e-10);
        CHECK(r.first_order_formula_deviation < 1e-12);
        CHECK(r.y_antisymmetric_max < 1e-12);
        CHECK(r.y_diagonal_formula_max < 1e-12);
        CHECK(r.y_symmetric_spread < 1e-12);
        CHECK(r.y_closed_form_deviation < 1e-10);
        CHECK(r.z_diagonal_max < 1e-12);
        CHECK(r.z_symmetric_max < 1e-12);
        CHECK(r.gauge_max < 1e-12);
    }
}

TEST_CASE("convergence order of the truncation") {
    const ExpansionReport generic = dita_expand({0.1, -0.07, 0.05, 0.02}, 3);
    REQUIRE(generic.convergence_order);
    CHECK(*generic.convergence_order >= 3.5);
    CHECK(*generic.convergence_order <= 4.5);
    const ExpansionReport affine = dita_expand(affine_seed(AffineDirection::I, 0.1), 3);
    CHECK_FALSE(affine.convergence_order);
}

TEST_CASE("affine directions") {
    for (const char* name : {"i", "ii", "iii", "iv", "v"}) {
        const AffineDirection d = affine_direction_from_name(name);
        CHECK(affine_direction_name(d) == name);
        CHECK(affine_direction_check(d, {0.3, 1.0, 2.0, kPi}));
        const ExpansionReport r = dita_expand(affine_seed(d, 0.2), 3);
        CHECK(r.stages[1].solution.x.cwiseAbs().maxCoeff() < 1e-12);
        CHECK(r.stages[2].solution.x.cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(affine_seed(AffineDirection::I, 0.4) == ExpansionSeed{0.4, 0, 0, 0});
    CHECK(affine_seed(AffineDirection::V, 0.4) == ExpansionSeed{0.4, 0.4, -0.4, -0.4});
    CHECK_FALSE(affine_direction_check(ExpansionSeed{1, 0.3, 0.2, 0}, {0.5}));
    CHECK_THROWS(affine_direction_from_name("vi"));
}

TEST_CASE("Hermitian direction") {
    CHECK(hermitian_seed(0.1) == ExpansionSeed{-0.1, -0.1, 0.2, 0.1});
    const ExpansionReport r = dita_expand(hermitian_seed(0.05), 3);
    CHECK(r.consistent);
    CHECK(std::abs(r.y_common) > 1e-6);
    const HermitianMatch m = match_hermitian_direction(0.01);
    CHECK(m.equivalent);
    const HermitianMatch generic = match_hermitian_family({0.01, 0.004, -0.006, 0.003});
    CHECK_FALSE(generic.equivalent);
}

TEST_CASE("expansion input errors") {
    CHECK_THROWS_AS(dita_expand({0.5, 0, 0, 0}, 3), InvalidInput);
    CHECK_THROWS_AS(dita_expand({0.1, 0, 0, 0}, 4), InvalidInput);
    CHECK_THROWS_AS(dita_expand({0.1, 0, 0, 0}, 0), InvalidInput);
}
