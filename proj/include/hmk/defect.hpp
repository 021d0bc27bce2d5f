// Defect of a Hadamard matrix and the staged phase expansion around D(0).
#pragma once

#include "hmk/basis.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hmk {

/// Phases on the non-trivial entries of a dephased matrix: x(a-1, b-1) multiplies
/// entry (a, b) by exp(i x) for 1 <= a, b <= N-1.
struct PhasePerturbation {
    Eigen::MatrixXd x;

    explicit PhasePerturbation(int interior = 5) : x(Eigen::MatrixXd::Zero(interior, interior)) {}
    explicit PhasePerturbation(Eigen::MatrixXd values) : x(std::move(values)) {}

    /// Entry with 1-based matrix indices, as in x_12.
    double& at(int a, int b) { return x(a - 1, b - 1); }
    double at(int a, int b) const { return x(a - 1, b - 1); }

    Eigen::MatrixXd diagonal() const;
    /// (x_ab + x_ba)/2 off the diagonal.
    Eigen::MatrixXd symmetric() const;
    /// (x_ab - x_ba)/2.
    Eigen::MatrixXd antisymmetric() const;

    /// Entrywise h_ab exp(i x_ab) on the interior.
    CMatrix apply(const CMatrix& h) const;
};

struct DefectAnalysis {
    int defect = 0;
    int rank = 0;
    Eigen::VectorXd singular_values;  // descending
    double threshold = 0.0;           // absolute cutoff used for the rank
};

/// Real Jacobian of the row inner products and norms of the dephased matrix with
/// respect to the (N-1)^2 interior phases. Rows: Re and Im of each pair a < a',
/// then N norm rows (identically zero).
Eigen::MatrixXd unitarity_jacobian(const CMatrix& dephased);

/// Throws InvalidInput for a non-Hadamard matrix and IllConditioned when a singular
/// value lies within a factor 10 of the threshold.
DefectAnalysis defect_analysis(const BasisMatrix& h, const Tolerances& tol = {});
int defect(const BasisMatrix& h, const Tolerances& tol = {});

/// The four free antisymmetric values (x_[12], x_[13], x_[24], x_[34]).
using ExpansionSeed = std::array<double, 4>;

struct StageReport {
    int order = 0;
    PhasePerturbation solution;
    double residual = 0.0;  // least-squares residual of the stage's unitarity equations
    bool consistent = false;
};

struct ExpansionReport {
    ExpansionSeed seed{};
    int order = 0;
    std::vector<StageReport> stages;  // orders 1..order

    // first order
    double first_order_formula_deviation = 0.0;  // closed-form dependent entries vs stage solve

    // second order
    double y_antisymmetric_max = 0.0;    // max |y_[ab]|
    double y_diagonal_formula_max = 0.0; // max deviation from the five diagonal formulas
    double y_symmetric_spread = 0.0;     // max - min of y_(ab)
    double y_common = 0.0;               // y_(ab) = y
    double y_closed_form = 0.0;          // y from the closed form
    double y_closed_form_deviation = 0.0;

    // third order
    double z_diagonal_max = 0.0;
    double z_symmetric_max = 0.0;

    double gauge_max = 0.0;  // max over stages >= 2 of |y_[12]|, |y_[13]|, |y_[24]|, |y_[34]| and analogues
    bool consistent = false;
    /// Fitted exponent p of ||U†U - 1|| ~ eps^p; nullopt means unbounded (machine precision throughout).
    std::optional<double> convergence_order;
    std::vector<double> convergence_eps;
    std::vector<double> convergence_residuals;

    /// D(0) with phases x + y + z (truncated at `order`) for the seed scaled by eps.
    CMatrix matrix(double eps = 1.0) const;
};

/// Interior phases at first order: x_aa = 0, x_(ab) = 0, the free antisymmetric
/// seed values and the dependent antisymmetric entries.
PhasePerturbation first_order_phases(const ExpansionSeed& seed);

/// Solves the unitarity equations order by order around D(0). Throws InvalidInput
/// for |seed| > 0.3 or order outside 1..3, Inconsistent when a stage residual exceeds 1e-8.
ExpansionReport dita_expand(const ExpansionSeed& seed, int order = 3);

enum class AffineDirection { I, II, III, IV, V };

ExpansionSeed affine_seed(AffineDirection direction, double x);
AffineDirection affine_direction_from_name(const std::string& name);
std::string affine_direction_name(AffineDirection direction);

/// True iff D(0) with the first-order phases of the direction is Hadamard to 1e-11 for every x.
bool affine_direction_check(AffineDirection direction, const std::vector<double>& xs);
/// Same check for an arbitrary seed direction scaled by each x.
bool affine_direction_check(const ExpansionSeed& direction, const std::vector<double>& xs);

/// Seed of the non-affine direction (-x, -x, 2x, x).
ExpansionSeed hermitian_seed(double x);

struct HermitianMatch {
    double x = 0.0;  // scale along (-x,-x,2x,x); 0 for other seeds
    double theta = 0.0;
    int branch = +1;
    double invariant_distance = 0.0;  // Haagerup-invariant mismatch at the best theta
    bool equivalent = false;          // are_equivalent at 1e-6
};

/// Expands along (-x,-x,2x,x) to third order and scans theta near the points where
/// B(theta) meets the D(0) class for an equivalent member.
HermitianMatch match_hermitian_direction(double x);
/// Same scan for the third-order expansion of an arbitrary seed.
HermitianMatch match_hermitian_family(const ExpansionSeed& seed);

}  // namespace hmk
