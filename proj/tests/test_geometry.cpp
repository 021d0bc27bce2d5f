#include "doctest.h"
#include "support.hpp"

#include "hmk/geometry.hpp"

#include <cmath>
#include <random>

using namespace hmk;
using testing::fourier_at;

namespace {

// First k columns of the identity, the remaining columns from a random unitary on the complement.
BasisMatrix sharing_k_vectors(int n, int k, std::mt19937_64& rng) {
    const BasisMatrix r = random_basis(n - k, rng);
    CMatrix m = CMatrix::Zero(n, n);
    for (int i = 0; i < k; ++i) m(i, i) = 1.0;
    m.bottomRightCorner(n - k, n - k) = r.entries();
    return BasisMatrix(m);
}

BasisMatrix rotate(const CMatrix& u, const BasisMatrix& b) { return BasisMatrix(CMatrix(u * b.entries())); }

}  // namespace

TEST_CASE("distance examples") {
    const BasisMatrix one = BasisMatrix::identity(6);
    const BasisMatrix f = fourier_at(0, 0);
    CHECK(std::abs(chordal_distance_sq(one, f) - 1.0) < 1e-12);
    CHECK(std::abs(chordal_distance_via_projectors(one, f) - 1.0) < 1e-10);
    CHECK(std::abs(chordal_distance_sq(f, f)) < 1e-12);
    CHECK(std::abs(chordal_distance_via_projectors(f, f)) < 1e-10);
}

TEST_CASE("dual routes agree on random pairs") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
        const BasisMatrix a = random_basis(6, rng);
        const BasisMatrix b = random_basis(6, rng);
        const double d = chordal_distance_sq(a, b);
        CHECK(std::abs(d - chordal_distance_via_projectors(a, b)) < 1e-9);
        CHECK(std::abs(d - chordal_distance_from_angles(a, b)) < 1e-8);
        CHECK(d == chordal_distance_sq(b, a));
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
    }
}

TEST_CASE("distance invariances") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 20; ++i) {
        const BasisMatrix a = random_basis(6, rng);
        const BasisMatrix b = random_basis(6, rng);
        const CMatrix u = random_basis(6, rng).entries();
        const double d = chordal_distance_sq(a, b);
        CHECK(std::abs(chordal_distance_sq(rotate(u, a), rotate(u, b)) - d) < 1e-10);
        CHECK(std::abs(chordal_distance_sq(testing::rephase_columns(a, rng), b) - d) < 1e-10);
        CMatrix permuted = b.entries();
        permuted.col(0).swap(permuted.col(4));
        CHECK(std::abs(chordal_distance_sq(a, BasisMatrix(permuted)) - d) < 1e-10);
    }
}

TEST_CASE("shared vectors bound the distance") {
    std::mt19937_64 rng(3);
    const BasisMatrix one = BasisMatrix::identity(6);
    for (int k = 1; k <= 3; ++k)
        for (int i = 0; i < 20; ++i) CHECK(chordal_distance_sq(one, sharing_k_vectors(6, k, rng)) <= 1.0 - k / 5.0 + 1e-10);
}

TEST_CASE("distance 1 exactly for unbiased pairs, 0 for rephased copies") {
    std::mt19937_64 rng(4);
    const BasisMatrix f = fourier_at(0.1, 0.05);
    CHECK(std::abs(chordal_distance_sq(BasisMatrix::identity(6), f) - 1.0) < 1e-12);
    CHECK(std::abs(chordal_distance_sq(f, testing::rephase_columns(f, rng))) < 1e-12);
    CHECK(chordal_distance_sq(f, random_basis(6, rng)) < 1.0 - 1e-6);
}

TEST_CASE("square roots satisfy the triangle inequality") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
        const BasisMatrix a = random_basis(4, rng), b = random_basis(4, rng), c = random_basis(4, rng);
        const double ab = std::sqrt(chordal_distance_sq(a, b));
        const double bc = std::sqrt(chordal_distance_sq(b, c));
        const double ac = std::sqrt(chordal_distance_sq(a, c));
        CHECK(ac <= ab + bc + 1e-12);
    }
}

TEST_CASE("Bloch vectors and frames") {
    std::mt19937_64 rng(6);
    const BasisMatrix b = random_basis(6, rng);
    for (int a = 0; a < 6; ++a) {
        const Eigen::VectorXd v = bloch_vector(b.entries().col(a));
        CHECK(std::abs(v.squaredNorm() - 1.0) < 1e-12);
    }
    const GrassmannFrame g = GrassmannFrame::of(b);
    CHECK(g.frame.rows() == 35);
    CHECK((g.projector * g.projector - g.projector).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(g.projector.trace() - 5.0) < 1e-10);
    CHECK(g.embedding_dimension == (1296 - 36 - 2) / 2);
}

TEST_CASE("random bases") {
    std::mt19937_64 rng(7);
    const BasisMatrix r = random_basis(6, rng);
    CHECK(r.unitarity_residual() < 1e-10);
    CHECK_FALSE(is_hadamard(r));
    CHECK(max_abs_diff(random_basis(6, std::uint64_t{1}).entries(), random_basis(6, std::uint64_t{1}).entries()) == 0.0);
    CHECK(max_abs_diff(random_basis(6, std::uint64_t{1}).entries(), random_basis(6, std::uint64_t{2}).entries()) > 1e-3);
    double sum = 0.0;
    const int samples = 100000;
    std::mt19937_64 g(8);
    for (int i = 0; i < samples; ++i) sum += std::norm(random_basis(6, g)(0, 0));
    CHECK(std::abs(sum / samples - 1.0 / 6) < 0.003);
}

TEST_CASE("average distance brackets N/(N+1)") {
    for (int n : {2, 3, 6}) {
        const Estimate e = average_distance_estimate(n, 100000, 1, 1);
        const double target = static_cast<double>(n) / (n + 1);
        INFO("N = " << n << " mean " << e.mean << " se " << e.std_error);
        CHECK(std::abs(e.mean - target) <= 4 * e.std_error);
        CHECK(std::abs(e.mean - target) < 0.003);
    }
}

TEST_CASE("average estimate does not depend on the worker count") {
    const Estimate a = average_distance_estimate(3, 5000, 9, 1);
    const Estimate b = average_distance_estimate(3, 5000, 9, 3);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("quality function") {
    const BasisMatrix one = BasisMatrix::identity(2);
    const BasisMatrix f2 = fourier_matrix(2);
    CMatrix g = f2.entries();
    g.row(1) *= cplx(0, 1);
    CHECK(std::abs(mub_quality_f({one, f2, BasisMatrix(g)}) - 6.0) < 1e-12);
    CHECK(std::abs(mub_quality_f({f2, f2})) < 1e-12);
}

TEST_CASE("random set scan stays below 1") {
    const RandomSetScan s = random_set_scan(6, 2800, 1, 1);
    CHECK(s.bases == 2800);
    CHECK(s.best_min_distance_4 > 0.5);
    CHECK(s.best_min_distance_4 < 1.0 - 1e-6);
}
