#include "hmk/equivalence.hpp"

#include "hmk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hmk {

CMatrix EquivalenceWitness::apply(const CMatrix& h2) const {
    const int n = static_cast<int>(row_permutation.size());
    CMatrix out(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            out(a, b) = row_phases[static_cast<std::size_t>(a)] * h2(row_permutation[static_cast<std::size_t>(a)],
                                                                      col_permutation[static_cast<std::size_t>(b)]) *
                        col_phases[static_cast<std::size_t>(b)];
    return out;
}

EquivalenceWitness EquivalenceWitness::inverse() const {
    const std::size_t n = row_permutation.size();
    EquivalenceWitness w;
    w.row_permutation.assign(n, 0);
    w.col_permutation.assign(n, 0);
    w.row_phases.assign(n, {});
    w.col_phases.assign(n, {});
    // H2(r, c) = conj(row_phases[a]) H1(a, b) conj(col_phases[b]) with r = rp[a], c = cp[b]
    for (std::size_t a = 0; a < n; ++a) {
        const auto r = static_cast<std::size_t>(row_permutation[a]);
        w.row_permutation[r] = static_cast<int>(a);
        w.row_phases[r] = std::conj(row_phases[a]);
    }
    for (std::size_t b = 0; b < n; ++b) {
        const auto c = static_cast<std::size_t>(col_permutation[b]);
        w.col_permutation[c] = static_cast<int>(b);
        w.col_phases[c] = std::conj(col_phases[b]);
    }
    return w;
}

namespace {

cplx unit(cplx z) {
    const double r = std::abs(z);
    return r > 0 ? z / r : cplx{1.0, 0.0};
}

// h(rows[a], cols[b]) = u[a] k(a, b) v[b] with k dephased
struct Dephased {
    CMatrix k;
    std::vector<cplx> u;
    std::vector<cplx> v;
};

Dephased dephase_at(const CMatrix& h, const std::vector<int>& rows, const std::vector<int>& cols) {
    const int n = static_cast<int>(h.rows());
    Dephased d;
    d.u.resize(static_cast<std::size_t>(n));
    d.v.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) d.u[static_cast<std::size_t>(a)] = unit(h(rows[static_cast<std::size_t>(a)], cols[0]));
    for (int b = 0; b < n; ++b)
        d.v[static_cast<std::size_t>(b)] = unit(h(rows[0], cols[static_cast<std::size_t>(b)])) * std::conj(d.u[0]);
    d.k.resize(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            d.k(a, b) = std::conj(d.u[static_cast<std::size_t>(a)]) *
                        h(rows[static_cast<std::size_t>(a)], cols[static_cast<std::size_t>(b)]) *
                        std::conj(d.v[static_cast<std::size_t>(b)]);
    return d;
}

bool same_multiset(const CMatrix& k1, int c1, const CMatrix& k2, int c2, double tol) {
    const int n = static_cast<int>(k1.rows());
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    for (int a = 1; a < n; ++a) {
        bool found = false;
        for (int r = 1; r < n && !found; ++r) {
            if (used[static_cast<std::size_t>(r)]) continue;
            if (std::abs(k1(a, c1) - k2(r, c2)) <= tol) {
                used[static_cast<std::size_t>(r)] = 1;
                found = true;
            }
        }
        if (!found) return false;
    }
    return true;
}

// rows of k1 matched to rows of k2 under the column map tau; rows of a unitary
// matrix are pairwise distinct, so a greedy match is exact
std::optional<std::vector<int>> match_rows(const CMatrix& k1, const CMatrix& k2, const std::vector<int>& tau, double tol) {
    const int n = static_cast<int>(k1.rows());
    std::vector<int> sigma(static_cast<std::size_t>(n), 0);
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    used[0] = 1;
    for (int a = 1; a < n; ++a) {
        int hit = -1;
        for (int r = 1; r < n && hit < 0; ++r) {
            if (used[static_cast<std::size_t>(r)]) continue;
            bool ok = true;
            for (int b = 1; b < n && ok; ++b) ok = std::abs(k1(a, b) - k2(r, tau[static_cast<std::size_t>(b)])) <= tol;
            if (ok) hit = r;
        }
        if (hit < 0) return std::nullopt;
        used[static_cast<std::size_t>(hit)] = 1;
        sigma[static_cast<std::size_t>(a)] = hit;
    }
    return sigma;
}

struct ColumnSearch {
    const CMatrix& k1;
    const CMatrix& k2;
    const std::vector<std::vector<char>>& compat;
    double tol;
    std::vector<int> tau;
    std::vector<char> used;
    std::vector<int> sigma;

    bool run(int b) {
        const int n = static_cast<int>(k1.rows());
        if (b == n) {
            auto s = match_rows(k1, k2, tau, tol);
            if (!s) return false;
            sigma = std::move(*s);
            return true;
        }
        for (int c = 1; c < n; ++c) {
            if (used[static_cast<std::size_t>(c)] || !compat[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)])
                continue;
            used[static_cast<std::size_t>(c)] = 1;
            tau[static_cast<std::size_t>(b)] = c;
            if (run(b + 1)) return true;
            used[static_cast<std::size_t>(c)] = 0;
        }
        return false;
    }
};

std::vector<int> pivot_order(int n, int first) {
    std::vector<int> p{first};
    for (int i = 0; i < n; ++i)
        if (i != first) p.push_back(i);
    return p;
}

}  // namespace

BasisMatrix dephase(const BasisMatrix& h) {
    const int n = h.dimension();
    std::vector<int> id(static_cast<std::size_t>(n));
    std::iota(id.begin(), id.end(), 0);
    Dephased d = dephase_at(h.entries(), id, id);
    const std::string label = h.label().empty() ? std::string{} : h.label() + "~";
    if (h.exact() && h.exact()->cells[0].is_exact()) {
        const PhaseGrid& g = *h.exact();
        PhaseGrid out = g;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                out.at(a, b) = g.at(a, b) * g.at(a, 0).conj() * g.at(0, b).conj() * g.at(0, 0);
        BasisMatrix exact(std::move(out), label);
        if (exact.exact_mismatch() <= 1e-12 && max_abs_diff(exact.entries(), d.k) <= 1e-12) return exact;
    }
    return BasisMatrix(std::move(d.k), label);
}

HaagerupInvariant HaagerupInvariant::of(const BasisMatrix& h) {
    const int n = h.dimension();
    const double n2 = static_cast<double>(n) * n;
    const CMatrix& m = h.entries();
    HaagerupInvariant inv;
    const std::size_t total = static_cast<std::size_t>(n) * n * n * n;
    inv.re.reserve(total);
    inv.im.reserve(total);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const cplx v = n2 * m(i, j) * m(k, l) * std::conj(m(i, l)) * std::conj(m(k, j));
                    inv.re.push_back(std::llround(v.real() * 1e8));
                    inv.im.push_back(std::llround(v.imag() * 1e8));
                }
    std::sort(inv.re.begin(), inv.re.end());
    std::sort(inv.im.begin(), inv.im.end());
    return inv;
}

bool HaagerupInvariant::matches(const HaagerupInvariant& other, std::int64_t slack) const {
    if (re.size() != other.re.size()) return false;
    for (std::size_t i = 0; i < re.size(); ++i)
        if (std::llabs(re[i] - other.re[i]) > slack || std::llabs(im[i] - other.im[i]) > slack) return false;
    return true;
}

std::optional<EquivalenceWitness> are_equivalent(const BasisMatrix& h1, const BasisMatrix& h2, double tol) {
    const int n = h1.dimension();
    if (n != h2.dimension()) throw InvalidInput("are_equivalent: dimension mismatch");
    if (n == 0) return std::nullopt;
    if (tol <= 1e-8 && !HaagerupInvariant::of(h1).matches(HaagerupInvariant::of(h2))) return std::nullopt;

    const Dephased d1 = dephase_at(h1.entries(), pivot_order(n, 0), pivot_order(n, 0));
    for (int r = 0; r < n; ++r) {
        const std::vector<int> rho = pivot_order(n, r);
        for (int c = 0; c < n; ++c) {
            const std::vector<int> gamma = pivot_order(n, c);
            const Dephased d2 = dephase_at(h2.entries(), rho, gamma);
            std::vector<std::vector<char>> compat(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
            bool feasible = true;
            for (int b = 1; b < n && feasible; ++b) {
                bool any = false;
                for (int b2 = 1; b2 < n; ++b2) {
                    const bool ok = same_multiset(d1.k, b, d2.k, b2, tol);
                    compat[static_cast<std::size_t>(b)][static_cast<std::size_t>(b2)] = ok;
                    any = any || ok;
                }
                feasible = any;
            }
            if (!feasible) continue;

            ColumnSearch search{d1.k, d2.k, compat, tol, std::vector<int>(static_cast<std::size_t>(n), 0),
                                std::vector<char>(static_cast<std::size_t>(n), 0), {}};
            search.used[0] = 1;
            if (!search.run(1)) continue;
            search.sigma[0] = 0;

            EquivalenceWitness w;
            for (int a = 0; a < n; ++a) {
                const auto s = static_cast<std::size_t>(search.sigma[static_cast<std::size_t>(a)]);
                w.row_permutation.push_back(rho[s]);
                w.row_phases.push_back(d1.u[static_cast<std::size_t>(a)] * std::conj(d2.u[s]));
            }
            for (int b = 0; b < n; ++b) {
                const auto t = static_cast<std::size_t>(search.tau[static_cast<std::size_t>(b)]);
                w.col_permutation.push_back(gamma[t]);
                w.col_phases.push_back(d1.v[static_cast<std::size_t>(b)] * std::conj(d2.v[t]));
            }
            if (max_abs_diff(w.apply(h2.entries()), h1.entries()) <= 4 * tol) return w;
        }
    }
    return std::nullopt;
}

bool unordered_pair_equivalent(const BasisMatrix& h1, const BasisMatrix& h2, double tol) {
    return are_equivalent(h1, h2, tol).has_value() || are_equivalent(h1, h2.adjoint(), tol).has_value();
}

double signed_turn(const PhaseValue& x) {
    double t = x.turn();
    if (t > 0.5) t -= 1.0;
    if (std::abs(t) < 1e-12 || std::abs(std::abs(t) - 1.0) < 1e-12) t = 0.0;
    return t;
}

namespace {

double unsigned_turn(const PhaseValue& x) {
    const double t = x.turn();
    return t > 1.0 - 1e-12 ? 0.0 : t;
}

bool same_turn(const PhaseValue& a, const PhaseValue& b) {
    return std::abs(std::remainder(a.turn() - b.turn(), 1.0)) <= 1e-12;
}

bool in_fourier_triangle(double x1, double x2) {
    constexpr double eps = 1e-12;
    return x1 <= 1.0 / 6.0 + eps && x2 >= -eps && x2 <= x1 / 2.0 + eps;
}

}  // namespace

std::vector<std::pair<PhaseValue, PhaseValue>> fourier_orbit(const PhaseValue& x1, const PhaseValue& x2) {
    using Point = std::pair<PhaseValue, PhaseValue>;
    const std::vector<Point (*)(const Point&)> generators{
        [](const Point& p) -> Point { return {p.first * PhaseValue::root(2, 6), p.second * PhaseValue::root(1, 6)}; },
        [](const Point& p) -> Point { return {p.first * PhaseValue::root(1, 6), p.second * PhaseValue::root(2, 6)}; },
        [](const Point& p) -> Point { return {p.second, p.first}; },
        [](const Point& p) -> Point { return {p.first.conj(), p.second.conj()}; },
        [](const Point& p) -> Point { return {p.second * p.first.conj(), p.first.conj()}; },
    };
    std::vector<Point> orbit{{x1, x2}};
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        for (auto g : generators) {
            Point q = g(orbit[i]);
            const bool seen = std::any_of(orbit.begin(), orbit.end(), [&](const Point& p) {
                return same_turn(p.first, q.first) && same_turn(p.second, q.second);
            });
            if (!seen) orbit.push_back(std::move(q));
        }
    }
    return orbit;
}

std::pair<PhaseValue, PhaseValue> reduce_fourier_params(const PhaseValue& x1, const PhaseValue& x2) {
    const auto orbit = fourier_orbit(x1, x2);
    const std::pair<PhaseValue, PhaseValue>* best = nullptr;
    for (const auto& p : orbit) {
        const double a = unsigned_turn(p.first);
        const double b = unsigned_turn(p.second);
        if (!in_fourier_triangle(a, b)) continue;
        if (!best || a < unsigned_turn(best->first) - 1e-12 ||
            (a <= unsigned_turn(best->first) + 1e-12 && b < unsigned_turn(best->second) - 1e-12))
            best = &p;
    }
    if (!best) throw Error("Fourier orbit misses the fundamental triangle");
    return *best;
}

std::pair<TurnFraction, TurnFraction> reduce_fourier_params(TurnFraction x1, TurnFraction x2) {
    const auto [a, b] = reduce_fourier_params(PhaseValue(RationalRoot{x1}), PhaseValue(RationalRoot{x2}));
    return {std::get<RationalRoot>(a.kind()).turn, std::get<RationalRoot>(b.kind()).turn};
}

PhaseValue reduce_dita_param(const PhaseValue& x) {
    const PhaseValue half = PhaseValue::root(1, 2);
    const PhaseValue quarter = PhaseValue::root(1, 4);
    const std::vector<PhaseValue> images{x, x * half, x.conj() * quarter, x.conj() * quarter * half};
    for (const auto& p : images) {
        const double t = signed_turn(p);
        if (t >= -0.125 - 1e-12 && t <= 0.125 + 1e-12) return p;
    }
    throw Error("Dita orbit misses [-1/8, 1/8]");
}

}  // namespace hmk
