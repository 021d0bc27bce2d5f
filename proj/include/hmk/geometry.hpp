// Chordal Grassmannian distance between bases, random bases and the MUB quality function.
#pragma once

#include "hmk/basis.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace hmk {

/// 1 - 1/(N-1) Σ (|<e_a|f_b>|^2 - 1/N)^2 from the overlap matrix.
double chordal_distance_sq(const BasisMatrix& b1, const BasisMatrix& b2);

/// Bloch vector of a unit vector in the generalized Gell-Mann basis, scaled so that
/// the dot product of two Bloch vectors equals (1/2) Tr(e f).
Eigen::VectorXd bloch_vector(const CVector& e);

struct GrassmannFrame {
    Eigen::MatrixXd frame;      // (N^2-1) x N, sqrt((N-1)/N) [e_1 ... e_N]
    Eigen::MatrixXd projector;  // frame * frame^T
    long long embedding_dimension = 0;  // (N^4 - N^2 - 2) / 2

    static GrassmannFrame of(const BasisMatrix& b);
};

/// Tr(P1 - P2)^2 / (2(N-1)) on the Bloch-vector projectors.
double chordal_distance_via_projectors(const BasisMatrix& b1, const BasisMatrix& b2);

/// Principal angles between the two (N-1)-planes, ascending.
Eigen::VectorXd principal_angles(const BasisMatrix& b1, const BasisMatrix& b2);
/// 1 - 1/(N-1) Σ cos^2 θ_i.
double chordal_distance_from_angles(const BasisMatrix& b1, const BasisMatrix& b2);

/// Haar-random unitary (QR of a complex Ginibre matrix with the phase of R's diagonal removed).
BasisMatrix random_basis(int n, std::mt19937_64& rng);
BasisMatrix random_basis(int n, std::uint64_t seed);

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Monte-Carlo mean of chordal_distance_sq(1, random basis). Samples are drawn in
/// fixed blocks with per-block seeds, so the result does not depend on `workers`.
Estimate average_distance_estimate(int n, std::size_t samples, std::uint64_t seed, int workers = 1);

/// Sum of chordal_distance_sq over ordered pairs i != j.
double mub_quality_f(const std::vector<BasisMatrix>& bases);

/// Best min-pairwise-distance found among disjoint groups of random bases.
struct RandomSetScan {
    std::size_t bases = 0;
    double best_min_distance_4 = 0.0;
    double best_min_distance_7 = 0.0;
};

/// Draws `bases` random bases for groups of four and the same number for groups of seven.
RandomSetScan random_set_scan(int n, std::size_t bases, std::uint64_t seed, int workers = 1);

}  // namespace hmk
