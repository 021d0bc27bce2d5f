#include "hmk/catalog.hpp"

#include "hmk/errors.hpp"
#include "hmk/search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <optional>
#include <sstream>

namespace hmk {

namespace {

constexpr int kOrder = 6;

PhaseValue quarter(int k) { return PhaseValue::root(k, 4); }
PhaseValue root24(int k) { return PhaseValue::root(k, 24); }

void require_arity(const FamilySpec& spec, std::size_t n) {
    if (spec.phases.size() != n)
        throw BadArity(family_name(spec.family) + " takes " + std::to_string(n) + " parameter(s), got " +
                       std::to_string(spec.phases.size()));
}

PhaseGrid make_grid() {
    PhaseGrid g;
    g.dim = kOrder;
    g.cells.assign(kOrder * kOrder, PhaseValue::one());
    return g;
}

BasisMatrix fourier_family(const PhaseValue& z1, const PhaseValue& z2, bool transposed, const std::string& label) {
    PhaseGrid g = make_grid();
    const std::array<PhaseValue, 3> z{PhaseValue::one(), z1, z2};
    for (int a = 0; a < kOrder; ++a)
        for (int b = 0; b < kOrder; ++b) {
            PhaseValue v = PhaseValue::root(a * b, kOrder);
            if (a % 2 == 1) v = v * z[static_cast<std::size_t>(b % 3)];
            if (transposed)
                g.at(b, a) = v;
            else
                g.at(a, b) = v;
        }
    return BasisMatrix(std::move(g), label);
}

BasisMatrix bjorck_matrix(bool conjugate, const std::string& label) {
    // first row 1, i d, -d, -i, -dbar, i dbar; C_ab depends on (b - a) mod 6
    const std::array<PhaseValue, kOrder> row{
        PhaseValue::one(),
        PhaseValue::special(Special::d, 1, TurnFraction(1, 4)),
        PhaseValue::special(Special::d, 1, TurnFraction(1, 2)),
        PhaseValue::root(3, 4),
        PhaseValue::special(Special::d, -1, TurnFraction(1, 2)),
        PhaseValue::special(Special::d, -1, TurnFraction(1, 4)),
    };
    PhaseGrid g = make_grid();
    for (int a = 0; a < kOrder; ++a)
        for (int b = 0; b < kOrder; ++b) {
            const PhaseValue& v = row[static_cast<std::size_t>(((b - a) % kOrder + kOrder) % kOrder)];
            g.at(a, b) = conjugate ? v.conj() : v;
        }
    return BasisMatrix(std::move(g), label);
}

BasisMatrix dita_family(const PhaseValue& z, const std::string& label) {
    // entry = i^quarters * z^power
    static constexpr int quarters[kOrder][kOrder] = {
        {0, 0, 0, 0, 0, 0}, {0, 2, 1, 3, 3, 1}, {0, 1, 2, 1, 3, 3},
        {0, 3, 1, 2, 1, 3}, {0, 3, 3, 1, 2, 1}, {0, 1, 3, 3, 1, 2},
    };
    static constexpr int power[kOrder][kOrder] = {
        {0, 0, 0, 0, 0, 0},  {0, 0, 0, 0, 0, 0}, {0, 0, 0, 1, 1, 0},
        {0, 0, -1, 0, 0, -1}, {0, 0, -1, 0, 0, -1}, {0, 0, 0, 1, 1, 0},
    };
    PhaseGrid g = make_grid();
    for (int a = 0; a < kOrder; ++a)
        for (int b = 0; b < kOrder; ++b) {
            PhaseValue v = quarter(quarters[a][b]);
            if (power[a][b] == 1) v = v * z;
            if (power[a][b] == -1) v = v * z.conj();
            g.at(a, b) = v;
        }
    return BasisMatrix(std::move(g), label);
}

BasisMatrix twisted_fourier(const std::vector<PhaseValue>& diag, const std::string& label) {
    PhaseGrid g = make_grid();
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            const PhaseValue f = PhaseValue::root(a * b, 3);
            const PhaseValue fd = f * diag[static_cast<std::size_t>(b)];
            g.at(a, b) = f;
            g.at(a, b + 3) = f;
            g.at(a + 3, b) = fd;
            g.at(a + 3, b + 3) = fd * PhaseValue::root(1, 2);
        }
    return BasisMatrix(std::move(g), label);
}

using Block = std::array<std::array<int, 3>, 3>;  // exponents of omega = exp(2πi/24)

Block circulant_block(int r0, int r1, int r2) {
    const std::array<int, 3> r{r0, r1, r2};
    Block b{};
    for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) b[a][c] = r[static_cast<std::size_t>(((c - a) % 3 + 3) % 3)];
    return b;
}

Block dagger(const Block& b) {
    Block out{};
    for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) out[a][c] = (24 - b[c][a]) % 24;
    return out;
}

Block shifted(const Block& b, int k) {
    Block out{};
    for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) out[a][c] = (b[a][c] + k) % 24;
    return out;
}

BasisMatrix block_matrix(const Block& tl, const Block& tr, const Block& bl, const Block& br, const std::string& label) {
    PhaseGrid g = make_grid();
    for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) {
            g.at(a, c) = root24(tl[a][c]);
            g.at(a, c + 3) = root24(tr[a][c]);
            g.at(a + 3, c) = root24(bl[a][c]);
            g.at(a + 3, c + 3) = root24(br[a][c]);
        }
    return BasisMatrix(std::move(g), label);
}

BasisMatrix dita_block_circulant(int selector, const std::string& label) {
    // the printed "0" in the last entry of C1 is read as omega^0 = 1
    const Block c1 = circulant_block(0, 11, 1);
    const Block c2 = circulant_block(0, 5, 7);
    const Block c3 = circulant_block(0, 6, 6);
    const Block c4 = circulant_block(15, 3, 3);
    switch (selector) {
        case 0: return block_matrix(c3, c4, c4, shifted(dagger(c3), 18), label);
        case 1: return block_matrix(c1, c2, dagger(c2), shifted(dagger(c1), 12), label);
        case 2: return block_matrix(c2, c1, dagger(c1), shifted(dagger(c2), 12), label);
        case 3: return block_matrix(dagger(c1), dagger(c2), c2, shifted(c1, 12), label);
        case 4: return block_matrix(dagger(c2), dagger(c1), c1, shifted(c2, 12), label);
        default: throw OutOfRange("DitaBlockCirculant selector must be in 0..4");
    }
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::Fourier: return "fourier";
        case Family::FourierTransposed: return "fourier-transposed";
        case Family::Bjorck: return "bjorck";
        case Family::BjorckConjugate: return "bjorck-conjugate";
        case Family::Dita: return "dita";
        case Family::Hermitian: return "hermitian";
        case Family::Tao: return "tao";
        case Family::TwistedFourier: return "twisted-fourier";
        case Family::DitaBlockCirculant: return "dita-block-circulant";
    }
    return "?";
}

std::optional<Family> family_from_name(const std::string& name) {
    for (const auto& info : family_list())
        if (info.name == name) return info.family;
    return std::nullopt;
}

const std::vector<FamilyInfo>& family_list() {
    static const std::vector<FamilyInfo> list{
        {Family::Fourier, "fourier", "2 turns (x1,x2)"},
        {Family::FourierTransposed, "fourier-transposed", "2 turns (x1,x2)"},
        {Family::Bjorck, "bjorck", "none"},
        {Family::BjorckConjugate, "bjorck-conjugate", "none"},
        {Family::Dita, "dita", "1 turn (x)"},
        {Family::Hermitian, "hermitian", "theta (radians) and branch +/-"},
        {Family::Tao, "tao", "none"},
        {Family::TwistedFourier, "twisted-fourier", "2 or 3 turns (diagonal of D)"},
        {Family::DitaBlockCirculant, "dita-block-circulant", "selector 0..4"},
    };
    return list;
}

std::string FamilySpec::label() const {
    auto join = [this]() {
        std::string s;
        for (std::size_t i = 0; i < phases.size(); ++i) s += (i ? "," : "") + phases[i].turn_label();
        return s;
    };
    switch (family) {
        case Family::Fourier: return "F(" + join() + ")";
        case Family::FourierTransposed: return "FT(" + join() + ")";
        case Family::Bjorck: return "C";
        case Family::BjorckConjugate: return "Cbar";
        case Family::Dita: return "D(" + join() + ")";
        case Family::Hermitian: {
            std::ostringstream os;
            os.precision(10);
            os << "B(" << theta.value_or(0.0) << "," << (branch >= 0 ? "+" : "-") << ")";
            return os.str();
        }
        case Family::Tao: return "S";
        case Family::TwistedFourier: return "F_D(" + join() + ")";
        case Family::DitaBlockCirculant: return "Dbc" + std::to_string(selector);
    }
    return "?";
}

bool hermitian_admissible(double theta) { return std::cos(theta) <= (std::sqrt(3.0) - 1.0) / 2.0 + 1e-12; }

BasisMatrix hermitian_from_y(cplx y, int branch) {
    const double c = y.real();
    if (c > (std::sqrt(3.0) - 1.0) / 2.0 + 1e-12) throw OutOfRange("hermitian: cos(theta) exceeds (sqrt3-1)/2");
    const cplx one{1.0, 0.0};
    const cplx z = (one + 2.0 * y - y * y) / (y * (-one + 2.0 * y + y * y));
    // numerator of x rewritten as 2y(1 + cos ± i sqrt(1 - 2cos - 2cos^2)); the radicand
    // vanishes at the end points and is snapped there to keep x unimodular
    double radicand = 1.0 - 2.0 * c - 2.0 * c * c;
    if (std::abs(radicand) < 1e-11) radicand = 0.0;
    const double root = std::sqrt(std::max(0.0, radicand));
    const cplx x = 2.0 * y * cplx(1.0 + c, branch >= 0 ? root : -root) / (one + 2.0 * y - y * y);
    const cplx t = x * y * z;
    const cplx xb = std::conj(x), yb = std::conj(y), zb = std::conj(z), tb = std::conj(t);
    CMatrix m(kOrder, kOrder);
    // clang-format off
    m << 1.0,  1.0,  1.0,  1.0,  1.0,  1.0,
         1.0, -1.0,  -xb,   -y,    y,   xb,
         1.0,   -x,  1.0,    y,   zb,  -tb,
         1.0,  -yb,   yb, -1.0,  -tb,   tb,
         1.0,   yb,    z,   -t,  1.0,  -xb,
         1.0,    x,   -t,    t,   -x, -1.0;
    // clang-format on
    m /= std::sqrt(static_cast<double>(kOrder));
    return BasisMatrix(std::move(m));
}

BasisMatrix build(const FamilySpec& spec) {
    const std::string label = spec.label();
    switch (spec.family) {
        case Family::Fourier:
            require_arity(spec, 2);
            return fourier_family(spec.phases[0], spec.phases[1], false, label);
        case Family::FourierTransposed:
            require_arity(spec, 2);
            return fourier_family(spec.phases[0], spec.phases[1], true, label);
        case Family::Bjorck:
            require_arity(spec, 0);
            return bjorck_matrix(false, label);
        case Family::BjorckConjugate:
            require_arity(spec, 0);
            return bjorck_matrix(true, label);
        case Family::Dita:
            require_arity(spec, 1);
            return dita_family(spec.phases[0], label);
        case Family::Hermitian: {
            require_arity(spec, 0);
            if (!spec.theta) throw BadArity("hermitian takes theta");
            if (!hermitian_admissible(*spec.theta)) throw OutOfRange("hermitian: cos(theta) exceeds (sqrt3-1)/2");
            return hermitian_from_y(std::polar(1.0, *spec.theta), spec.branch).with_label(label);
        }
        case Family::Tao:
            require_arity(spec, 0);
            return tao();
        case Family::TwistedFourier: {
            if (spec.phases.size() == 2)
                return twisted_fourier({PhaseValue::one(), spec.phases[0], spec.phases[1]}, label);
            require_arity(spec, 3);
            return twisted_fourier(spec.phases, label);
        }
        case Family::DitaBlockCirculant:
            require_arity(spec, 0);
            return dita_block_circulant(spec.selector, label);
    }
    throw InvalidInput("unknown family");
}

namespace {

std::mutex tao_mutex;
std::optional<BasisMatrix> tao_cached;

bool is_cube_root_hadamard(const BasisMatrix& m) {
    if (m.dimension() != 6 || !is_hadamard(m) || !m.exact()) return false;
    return std::all_of(m.exact()->cells.begin(), m.exact()->cells.end(), [](const PhaseValue& p) {
        const auto* r = std::get_if<RationalRoot>(&p.kind());
        return r && 3 % r->turn.den() == 0;
    });
}

}  // namespace

const BasisMatrix& tao() {
    std::lock_guard<std::mutex> lock(tao_mutex);
    if (!tao_cached) {
        const auto found = enumerate_dephased_hadamards(SearchAlphabet(3), Tolerances{}, ScanOptions{});
        if (found.empty()) throw SearchFailed("no dephased Hadamard matrix over cube roots");
        tao_cached = found.front().with_label("S");
    }
    return *tao_cached;
}

bool install_tao(const BasisMatrix& m) {
    if (!is_cube_root_hadamard(m)) return false;
    std::lock_guard<std::mutex> lock(tao_mutex);
    if (!tao_cached) tao_cached = m.with_label("S");
    return true;
}

CMatrix fourier_entries(int n) {
    CMatrix m(n, n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) m(a, b) = s * unit_turn(static_cast<std::int64_t>(a) * b, n);
    return m;
}

BasisMatrix fourier_matrix(int n) {
    PhaseGrid g;
    g.dim = n;
    g.cells.reserve(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) g.cells.push_back(PhaseValue::root(static_cast<std::int64_t>(a) * b, n));
    return BasisMatrix(std::move(g), "F" + std::to_string(n));
}

}  // namespace hmk
