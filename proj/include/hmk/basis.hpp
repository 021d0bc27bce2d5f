#pragma once

#include "hmk/phase.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace hmk {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Numeric tolerances shared by every module.
struct Tolerances {
    double unitarity = 1e-10;     // max-norm bound on M†M - 1
    double unbiasedness = 1e-9;   // bound on | |<e|f>|^2 - 1/N |
    double rank_threshold = 1e-8; // relative singular-value cutoff
    int distance_report_digits = 2;

    /// Throws InvalidInput unless every tolerance is strictly positive.
    void validate() const;
};

enum class Normalization { InvSqrtDim, None };

/// Square grid of exact or float phases together with the scalar applied to it.
struct PhaseGrid {
    int dim = 0;
    std::vector<PhaseValue> cells;  // row-major
    Normalization normalization = Normalization::InvSqrtDim;

    const PhaseValue& at(int row, int col) const { return cells[static_cast<std::size_t>(row * dim + col)]; }
    PhaseValue& at(int row, int col) { return cells[static_cast<std::size_t>(row * dim + col)]; }
    double scale() const;
    CMatrix realize() const;
};

/// An N×N complex matrix read column-wise as a basis, optionally backed by exact phases.
///
/// Orthonormality is not enforced at construction: callers build perturbed or
/// deliberately broken matrices in tests and searches. Use unitarity_residual()
/// or validate() to check it.
class BasisMatrix {
public:
    BasisMatrix() = default;
    explicit BasisMatrix(CMatrix entries, std::string label = {});
    explicit BasisMatrix(PhaseGrid grid, std::string label = {});

    static BasisMatrix identity(int n);

    int dimension() const { return static_cast<int>(entries_.rows()); }
    const CMatrix& entries() const { return entries_; }
    cplx operator()(int row, int col) const { return entries_(row, col); }
    const std::optional<PhaseGrid>& exact() const { return exact_; }
    const std::string& label() const { return label_; }

    BasisMatrix with_label(std::string label) const;
    BasisMatrix adjoint() const;
    BasisMatrix transpose() const;
    BasisMatrix conjugate() const;

    /// ||M†M - 1||_max.
    double unitarity_residual() const;
    /// Largest deviation between the float entries and the exact grid (0 without a grid).
    double exact_mismatch() const;
    /// Throws ValidationError when the basis invariants fail.
    void validate(const Tolerances& tol = {}) const;

private:
    CMatrix entries_;
    std::optional<PhaseGrid> exact_;
    std::string label_;
};

/// Unitary to tol.unitarity and every ||M_ab|^2 - 1/N| <= tol.unbiasedness.
bool is_hadamard(const BasisMatrix& m, const Tolerances& tol = {});
/// Largest of the unitarity and modulus residuals used by is_hadamard.
double hadamard_residual(const BasisMatrix& m);

/// |<e_a|f_b>|^2 for the columns e of m1 and f of m2.
Eigen::MatrixXd overlap_abs2(const BasisMatrix& m1, const BasisMatrix& m2);

/// Every entry of M1†M2 has squared modulus within tol.unbiasedness of 1/N.
bool are_unbiased(const BasisMatrix& m1, const BasisMatrix& m2, const Tolerances& tol = {});
double unbiasedness_residual(const BasisMatrix& m1, const BasisMatrix& m2);

/// Max-norm distance between two matrices of equal shape.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

}  // namespace hmk
