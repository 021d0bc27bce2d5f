#include "hmk/basis.hpp"

#include "hmk/errors.hpp"

#include <cmath>

namespace hmk {

void Tolerances::validate() const {
    if (!(unitarity > 0) || !(unbiasedness > 0) || !(rank_threshold > 0) || distance_report_digits <= 0)
        throw InvalidInput("tolerances must be strictly positive");
}

double PhaseGrid::scale() const {
    return normalization == Normalization::InvSqrtDim ? 1.0 / std::sqrt(static_cast<double>(dim)) : 1.0;
}

CMatrix PhaseGrid::realize() const {
    CMatrix m(dim, dim);
    const double s = scale();
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) m(r, c) = s * at(r, c).realize();
    return m;
}

BasisMatrix::BasisMatrix(CMatrix entries, std::string label) : entries_(std::move(entries)), label_(std::move(label)) {
    if (entries_.rows() != entries_.cols()) throw InvalidInput("BasisMatrix must be square");
}

BasisMatrix::BasisMatrix(PhaseGrid grid, std::string label) : label_(std::move(label)) {
    if (grid.dim <= 0 || grid.cells.size() != static_cast<std::size_t>(grid.dim * grid.dim))
        throw InvalidInput("PhaseGrid has wrong size");
    entries_ = grid.realize();
    exact_ = std::move(grid);
}

BasisMatrix BasisMatrix::identity(int n) {
    if (n < 1) throw InvalidInput("identity: dimension must be positive");
    return BasisMatrix(CMatrix::Identity(n, n), "1");
}

BasisMatrix BasisMatrix::with_label(std::string label) const {
    BasisMatrix copy = *this;
    copy.label_ = std::move(label);
    return copy;
}

namespace {

std::optional<PhaseGrid> map_grid(const std::optional<PhaseGrid>& g, bool transpose, bool conjugate) {
    if (!g) return std::nullopt;
    PhaseGrid out = *g;
    for (int r = 0; r < g->dim; ++r)
        for (int c = 0; c < g->dim; ++c) {
            const PhaseValue& src = transpose ? g->at(c, r) : g->at(r, c);
            out.at(r, c) = conjugate ? src.conj() : src;
        }
    return out;
}

}  // namespace

BasisMatrix BasisMatrix::adjoint() const {
    BasisMatrix m(CMatrix(entries_.adjoint()), label_.empty() ? label_ : label_ + "^dag");
    m.exact_ = map_grid(exact_, true, true);
    return m;
}

BasisMatrix BasisMatrix::transpose() const {
    BasisMatrix m(CMatrix(entries_.transpose()), label_.empty() ? label_ : label_ + "^T");
    m.exact_ = map_grid(exact_, true, false);
    return m;
}

BasisMatrix BasisMatrix::conjugate() const {
    BasisMatrix m(CMatrix(entries_.conjugate()), label_.empty() ? label_ : label_ + "^*");
    m.exact_ = map_grid(exact_, false, true);
    return m;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidInput("max_abs_diff: shape mismatch");
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

double BasisMatrix::unitarity_residual() const {
    const int n = dimension();
    if (n == 0) return 0.0;
    return max_abs_diff(entries_.adjoint() * entries_, CMatrix::Identity(n, n));
}

double BasisMatrix::exact_mismatch() const {
    if (!exact_) return 0.0;
    return max_abs_diff(entries_, exact_->realize());
}

void BasisMatrix::validate(const Tolerances& tol) const {
    if (dimension() < 1) throw ValidationError("empty matrix");
    const double u = unitarity_residual();
    if (u > tol.unitarity)
        throw ValidationError("columns are not orthonormal (residual " + std::to_string(u) + ")");
    if (exact_) {
        for (const auto& p : exact_->cells)
            if (std::abs(std::abs(p.realize()) - 1.0) > 1e-13) throw ValidationError("exact entry is not unimodular");
        if (exact_mismatch() > 1e-12) throw ValidationError("float entries disagree with the exact grid");
    }
}

double hadamard_residual(const BasisMatrix& m) {
    const int n = m.dimension();
    double worst = m.unitarity_residual();
    const double target = 1.0 / n;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) worst = std::max(worst, std::abs(std::norm(m(r, c)) - target));
    return worst;
}

bool is_hadamard(const BasisMatrix& m, const Tolerances& tol) {
    const int n = m.dimension();
    if (n == 0) return false;
    if (m.unitarity_residual() > tol.unitarity) return false;
    const double target = 1.0 / n;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (std::abs(std::norm(m(r, c)) - target) > tol.unbiasedness) return false;
    return true;
}

Eigen::MatrixXd overlap_abs2(const BasisMatrix& m1, const BasisMatrix& m2) {
    if (m1.dimension() != m2.dimension()) throw InvalidInput("overlap: dimension mismatch");
    const int n = m1.dimension();
    // explicit summation order keeps overlap_abs2(a, b) == overlap_abs2(b, a)^T bit for bit
    Eigen::MatrixXd out(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            cplx s{0.0, 0.0};
            for (int c = 0; c < n; ++c) s += std::conj(m1(c, a)) * m2(c, b);
            out(a, b) = std::norm(s);
        }
    return out;
}

double unbiasedness_residual(const BasisMatrix& m1, const BasisMatrix& m2) {
    const Eigen::MatrixXd o = overlap_abs2(m1, m2);
    const double target = 1.0 / m1.dimension();
    return (o.array() - target).abs().maxCoeff();
}

bool are_unbiased(const BasisMatrix& m1, const BasisMatrix& m2, const Tolerances& tol) {
    return unbiasedness_residual(m1, m2) <= tol.unbiasedness;
}

}  // namespace hmk
