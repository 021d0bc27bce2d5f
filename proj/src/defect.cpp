#include "hmk/defect.hpp"

#include "hmk/catalog.hpp"
#include "hmk/equivalence.hpp"
#include "hmk/errors.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace hmk {

namespace {

constexpr int kInterior = 5;
constexpr double kConsistent = 1e-10;
constexpr double kInconsistent = 1e-8;

// gauge pairs (1-based): their antisymmetric parts are held at the seed (order 1) or 0
constexpr int kGauge[4][2] = {{1, 2}, {1, 3}, {2, 4}, {3, 4}};

int column(int a, int b) { return (a - 1) * kInterior + (b - 1); }

const CMatrix& dita_base() {
    static const CMatrix d = build(FamilySpec::dita(TurnFraction(0, 1))).entries();
    return d;
}

Eigen::VectorXd flatten(const PhasePerturbation& p) {
    Eigen::VectorXd v(kInterior * kInterior);
    for (int a = 1; a <= kInterior; ++a)
        for (int b = 1; b <= kInterior; ++b) v(column(a, b)) = p.at(a, b);
    return v;
}

PhasePerturbation unflatten(const Eigen::VectorXd& v) {
    PhasePerturbation p(kInterior);
    for (int a = 1; a <= kInterior; ++a)
        for (int b = 1; b <= kInterior; ++b) p.at(a, b) = v(column(a, b));
    return p;
}

// Columns for the 21 unknowns left once the gauge antisymmetric parts are removed:
// a gauge pair shares one column between (a,b) and (b,a).
Eigen::MatrixXd gauge_reduction() {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(kInterior * kInterior, kInterior * kInterior - 4);
    int k = 0;
    const auto gauge_partner = [](int a, int b) {
        for (const auto& g : kGauge)
            if (g[0] == b && g[1] == a) return true;
        return false;
    };
    for (int a = 1; a <= kInterior; ++a)
        for (int b = 1; b <= kInterior; ++b) {
            if (gauge_partner(a, b)) continue;  // folded into (b, a)
            r(column(a, b), k) = 1.0;
            for (const auto& g : kGauge)
                if (g[0] == a && g[1] == b) r(column(b, a), k) = 1.0;
            ++k;
        }
    return r;
}

// Stacked Re/Im of Σ_b conj(D_ab) D_a'b w_b over pairs a < a', matching the Jacobian rows.
// `term(a, a', b)` gives w_b for the pair.
template <class Term>
Eigen::VectorXd pair_sums(const CMatrix& d, Term term) {
    const int n = static_cast<int>(d.rows());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n * (n - 1) + n);
    int row = 0;
    for (int a = 0; a < n; ++a)
        for (int a2 = a + 1; a2 < n; ++a2) {
            cplx s{0.0, 0.0};
            for (int b = 0; b < n; ++b) s += std::conj(d(a, b)) * d(a2, b) * term(a, a2, b);
            out(row++) = s.real();
            out(row++) = s.imag();
        }
    return out;
}

double phase_at(const PhasePerturbation& p, int a, int b) { return (a == 0 || b == 0) ? 0.0 : p.at(a, b); }

double delta(const PhasePerturbation& p, int a, int a2, int b) { return phase_at(p, a2, b) - phase_at(p, a, b); }

struct LeastSquares {
    Eigen::VectorXd solution;
    double residual = 0.0;
};

LeastSquares solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs) {
    LeastSquares out;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    out.solution = qr.solve(rhs);
    out.residual = (a * out.solution - rhs).norm();
    return out;
}

StageReport stage(int order, const Eigen::MatrixXd& jac, const Eigen::VectorXd& rhs, const Eigen::VectorXd& offset) {
    static const Eigen::MatrixXd reduction = gauge_reduction();
    const LeastSquares ls = solve(jac * reduction, rhs - jac * offset);
    StageReport s;
    s.order = order;
    s.solution = unflatten(offset + reduction * ls.solution);
    s.residual = ls.residual;
    s.consistent = ls.residual < kConsistent;
    if (ls.residual > kInconsistent)
        throw Inconsistent("expansion stage " + std::to_string(order) + " residual " + std::to_string(ls.residual));
    return s;
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double lx = std::log(xs[i]);
        const double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double hermitian_mismatch(const HaagerupInvariant& target, double theta, int branch) {
    const HaagerupInvariant h = HaagerupInvariant::of(build(FamilySpec::hermitian(theta, branch)));
    std::int64_t worst = 0;
    for (std::size_t i = 0; i < h.re.size(); ++i) {
        worst = std::max(worst, std::abs(h.re[i] - target.re[i]));
        worst = std::max(worst, std::abs(h.im[i] - target.im[i]));
    }
    return static_cast<double>(worst) * 1e-8;
}

}  // namespace

Eigen::MatrixXd PhasePerturbation::diagonal() const { return Eigen::MatrixXd(x.diagonal().asDiagonal()); }

Eigen::MatrixXd PhasePerturbation::symmetric() const {
    Eigen::MatrixXd s = (x + x.transpose()) / 2.0;
    s.diagonal().setZero();
    return s;
}

Eigen::MatrixXd PhasePerturbation::antisymmetric() const { return (x - x.transpose()) / 2.0; }

CMatrix PhasePerturbation::apply(const CMatrix& h) const {
    if (h.rows() != x.rows() + 1 || h.cols() != x.cols() + 1)
        throw InvalidInput("PhasePerturbation::apply: dimension mismatch");
    CMatrix out = h;
    for (int a = 1; a < h.rows(); ++a)
        for (int b = 1; b < h.cols(); ++b) out(a, b) *= std::polar(1.0, x(a - 1, b - 1));
    return out;
}

Eigen::MatrixXd unitarity_jacobian(const CMatrix& h) {
    const int n = static_cast<int>(h.rows());
    const int m = n - 1;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n * (n - 1) + n, m * m);
    int row = 0;
    for (int a = 0; a < n; ++a)
        for (int a2 = a + 1; a2 < n; ++a2) {
            for (int b = 1; b < n; ++b) {
                const cplx c = std::conj(h(a, b)) * h(a2, b);
                const cplx dv = cplx{0.0, 1.0} * c;  // d/dx_{a'b}; d/dx_{ab} is the negative
                if (a >= 1) {
                    jac(row, (a - 1) * m + b - 1) -= dv.real();
                    jac(row + 1, (a - 1) * m + b - 1) -= dv.imag();
                }
                jac(row, (a2 - 1) * m + b - 1) += dv.real();
                jac(row + 1, (a2 - 1) * m + b - 1) += dv.imag();
            }
            row += 2;
        }
    // norm rows: |h_ab e^{ix}|^2 does not depend on x
    return jac;
}

DefectAnalysis defect_analysis(const BasisMatrix& h, const Tolerances& tol) {
    tol.validate();
    if (!is_hadamard(h, tol)) throw InvalidInput("defect: matrix is not Hadamard");
    const CMatrix d = dephase(h).entries();
    const Eigen::MatrixXd jac = unitarity_jacobian(d);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    DefectAnalysis out;
    out.singular_values = svd.singularValues();
    const double top = out.singular_values.size() ? out.singular_values(0) : 0.0;
    out.threshold = tol.rank_threshold * top;
    for (Eigen::Index i = 0; i < out.singular_values.size(); ++i) {
        const double s = out.singular_values(i);
        if (s > out.threshold / 10.0 && s < out.threshold * 10.0)
            throw IllConditioned("singular value " + std::to_string(s) + " within a factor 10 of the rank threshold");
        if (s > out.threshold) ++out.rank;
    }
    out.defect = static_cast<int>(jac.cols()) - out.rank;
    return out;
}

int defect(const BasisMatrix& h, const Tolerances& tol) { return defect_analysis(h, tol).defect; }

PhasePerturbation first_order_phases(const ExpansionSeed& seed) {
    const double x12 = seed[0], x13 = seed[1], x24 = seed[2], x34 = seed[3];
    PhasePerturbation p(kInterior);
    const auto set = [&p](int a, int b, double v) {
        p.at(a, b) = v;
        p.at(b, a) = -v;
    };
    set(1, 2, x12);
    set(1, 3, x13);
    set(2, 4, x24);
    set(3, 4, x34);
    set(1, 4, x12 + x34);
    set(1, 5, x13 + x34);
    set(2, 3, x13 + x24);
    set(2, 5, -x12 + x13);
    set(3, 5, -x24 + x34);
    set(4, 5, -x12 - x24);
    return p;
}

CMatrix ExpansionReport::matrix(double eps) const {
    PhasePerturbation total(kInterior);
    double scale = 1.0;
    for (const auto& s : stages) {
        scale *= eps;
        total.x += scale * s.solution.x;
    }
    return total.apply(dita_base());
}

ExpansionReport dita_expand(const ExpansionSeed& seed, int order) {
    if (order < 1 || order > 3) throw InvalidInput("dita_expand: order must be 1, 2 or 3");
    for (double s : seed)
        if (!(std::abs(s) <= 0.3)) throw InvalidInput("dita_expand: seed values must satisfy |s| <= 0.3");

    const CMatrix& d = dita_base();
    const Eigen::MatrixXd jac = unitarity_jacobian(d);
    ExpansionReport rep;
    rep.seed = seed;
    rep.order = order;

    // order 1: closed form, cross-checked against the gauge-fixed solve
    const PhasePerturbation x = first_order_phases(seed);
    {
        PhasePerturbation fixed(kInterior);
        for (int g = 0; g < 4; ++g) {
            fixed.at(kGauge[g][0], kGauge[g][1]) = seed[static_cast<std::size_t>(g)];
            fixed.at(kGauge[g][1], kGauge[g][0]) = -seed[static_cast<std::size_t>(g)];
        }
        const StageReport solved = stage(1, jac, Eigen::VectorXd::Zero(jac.rows()), flatten(fixed));
        rep.first_order_formula_deviation = max_abs(solved.solution.x - x.x);
        StageReport s1;
        s1.order = 1;
        s1.solution = x;
        s1.residual = (jac * flatten(x)).norm();
        s1.consistent = s1.residual < kConsistent;
        if (s1.residual > kInconsistent) throw Inconsistent("first-order relations violate unitarity");
        rep.stages.push_back(s1);
    }
    const Eigen::VectorXd zero_offset = Eigen::VectorXd::Zero(kInterior * kInterior);

    if (order >= 2) {
        // Σ c_b [iΔy - Δx²/2] = 0
        const Eigen::VectorXd rhs = pair_sums(d, [&](int a, int a2, int b) {
            const double dx = delta(x, a, a2, b);
            return cplx{dx * dx / 2.0, 0.0};
        });
        rep.stages.push_back(stage(2, jac, rhs, zero_offset));
        const PhasePerturbation& y = rep.stages.back().solution;

        rep.y_antisymmetric_max = max_abs(y.antisymmetric());
        const auto sq = [&x](int a, int b) { return x.at(a, b) * x.at(a, b); };
        const double two_y[kInterior] = {
            -sq(2, 1) + sq(3, 1) + sq(4, 1) - sq(5, 1),
            -sq(1, 2) - sq(3, 2) + sq(4, 2) + sq(5, 2),
            sq(1, 3) - sq(2, 3) - sq(4, 3) + sq(5, 3),
            sq(1, 4) + sq(2, 4) - sq(3, 4) - sq(5, 4),
            -sq(1, 5) + sq(2, 5) + sq(3, 5) - sq(4, 5),
        };
        for (int a = 1; a <= kInterior; ++a)
            rep.y_diagonal_formula_max = std::max(rep.y_diagonal_formula_max, std::abs(2.0 * y.at(a, a) - two_y[a - 1]));

        double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
        int count = 0;
        const Eigen::MatrixXd sym = y.symmetric();
        for (int a = 0; a < kInterior; ++a)
            for (int b = a + 1; b < kInterior; ++b) {
                lo = std::min(lo, sym(a, b));
                hi = std::max(hi, sym(a, b));
                sum += sym(a, b);
                ++count;
            }
        rep.y_symmetric_spread = hi - lo;
        rep.y_common = sum / count;
        const auto diff_sq = [&x](int c) {
            const double t = x.at(1, c) - x.at(2, c);
            return t * t;
        };
        rep.y_closed_form = (2.0 * y.at(1, 1) + 2.0 * y.at(2, 2) - diff_sq(3) + diff_sq(4) - diff_sq(5)) / 4.0;
        rep.y_closed_form_deviation = std::abs(rep.y_closed_form - rep.y_common);
    }

    if (order >= 3) {
        const PhasePerturbation& y = rep.stages[1].solution;
        // Σ c_b [iΔz - ΔxΔy - iΔx³/6] = 0
        const Eigen::VectorXd rhs = pair_sums(d, [&](int a, int a2, int b) {
            const double dx = delta(x, a, a2, b);
            const double dy = delta(y, a, a2, b);
            return cplx{dx * dy, dx * dx * dx / 6.0};
        });
        rep.stages.push_back(stage(3, jac, rhs, zero_offset));
        const PhasePerturbation& z = rep.stages.back().solution;
        rep.z_diagonal_max = max_abs(z.diagonal());
        rep.z_symmetric_max = max_abs(z.symmetric());
    }

    for (std::size_t k = 1; k < rep.stages.size(); ++k)
        for (const auto& g : kGauge)
            rep.gauge_max = std::max(rep.gauge_max, std::abs(rep.stages[k].solution.antisymmetric()(g[0] - 1, g[1] - 1)));

    rep.consistent = true;
    for (const auto& s : rep.stages) rep.consistent = rep.consistent && s.consistent;

    rep.convergence_eps = {0.1, 0.05, 0.025};
    bool all_tiny = true;
    for (double eps : rep.convergence_eps) {
        const CMatrix u = rep.matrix(eps);
        const double r = (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
        rep.convergence_residuals.push_back(r);
        all_tiny = all_tiny && r < 1e-13;
    }
    if (!all_tiny) rep.convergence_order = fit_slope(rep.convergence_eps, rep.convergence_residuals);
    return rep;
}

ExpansionSeed affine_seed(AffineDirection direction, double x) {
    switch (direction) {
        case AffineDirection::I: return {x, 0, 0, 0};
        case AffineDirection::II: return {0, x, 0, 0};
        case AffineDirection::III: return {0, 0, x, 0};
        case AffineDirection::IV: return {0, 0, 0, x};
        case AffineDirection::V: return {x, x, -x, -x};
    }
    throw InvalidInput("unknown affine direction");
}

AffineDirection affine_direction_from_name(const std::string& name) {
    if (name == "i") return AffineDirection::I;
    if (name == "ii") return AffineDirection::II;
    if (name == "iii") return AffineDirection::III;
    if (name == "iv") return AffineDirection::IV;
    if (name == "v") return AffineDirection::V;
    throw InvalidInput("affine direction must be one of i, ii, iii, iv, v: " + name);
}

std::string affine_direction_name(AffineDirection direction) {
    static const char* names[] = {"i", "ii", "iii", "iv", "v"};
    return names[static_cast<int>(direction)];
}

bool affine_direction_check(const ExpansionSeed& direction, const std::vector<double>& xs) {
    for (double x : xs) {
        ExpansionSeed s{};
        for (std::size_t i = 0; i < 4; ++i) s[i] = direction[i] * x;
        const BasisMatrix h(first_order_phases(s).apply(dita_base()));
        if (hadamard_residual(h) >= 1e-11) return false;
    }
    return true;
}

bool affine_direction_check(AffineDirection direction, const std::vector<double>& xs) {
    return affine_direction_check(affine_seed(direction, 1.0), xs);
}

ExpansionSeed hermitian_seed(double x) { return {-x, -x, 2 * x, x}; }

HermitianMatch match_hermitian_direction(double x) {
    HermitianMatch m = match_hermitian_family(hermitian_seed(x));
    m.x = x;
    return m;
}

HermitianMatch match_hermitian_family(const ExpansionSeed& seed) {
    const ExpansionReport rep = dita_expand(seed, 3);
    double x = 0.0;
    for (double s : seed) x = std::max(x, std::abs(s));
    const BasisMatrix expanded(rep.matrix(), "D(0)+hermitian");
    const HaagerupInvariant target = HaagerupInvariant::of(expanded);

    HermitianMatch best;
    best.invariant_distance = std::numeric_limits<double>::infinity();
    const double pi = std::acos(-1.0);
    const double centres[] = {pi, pi / 2, -pi / 2};
    const double half_width = std::max(0.05, 20.0 * x);
    for (double centre : centres)
        for (int branch : {+1, -1}) {
            const auto cost = [&](double t) {
                return hermitian_admissible(t) ? hermitian_mismatch(target, t, branch)
                                               : std::numeric_limits<double>::infinity();
            };
            constexpr int steps = 400;
            double arg = centre, val = cost(centre);
            for (int k = -steps; k <= steps; ++k) {
                const double t = centre + half_width * k / steps;
                const double v = cost(t);
                if (v < val) {
                    val = v;
                    arg = t;
                }
            }
            // golden-section refinement inside the bracketing grid cell
            double lo = arg - half_width / steps, hi = arg + half_width / steps;
            const double g = (std::sqrt(5.0) - 1.0) / 2.0;
            for (int it = 0; it < 60; ++it) {
                const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
                if (cost(m1) < cost(m2))
                    hi = m2;
                else
                    lo = m1;
            }
            const double t = (lo + hi) / 2.0;
            const double v = std::min(cost(t), val);
            const double theta = cost(t) <= val ? t : arg;
            if (v < best.invariant_distance) {
                best.invariant_distance = v;
                best.theta = theta;
                best.branch = branch;
            }
        }
    best.equivalent = are_equivalent(expanded, build(FamilySpec::hermitian(best.theta, best.branch)), 1e-6).has_value();
    return best;
}

}  // namespace hmk
