#include "hmk/phase.hpp"

#include "hmk/errors.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace hmk {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

double frac(double x) {
    double f = x - std::floor(x);
    return f >= 1.0 ? 0.0 : f;
}

}  // namespace

TurnFraction::TurnFraction(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw InvalidInput("TurnFraction: denominator must be positive");
    num = floor_mod(num, den);
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

TurnFraction TurnFraction::operator-() const { return TurnFraction(-num_, den_); }

TurnFraction operator+(const TurnFraction& a, const TurnFraction& b) {
    const std::int64_t l = std::lcm(a.den_, b.den_);
    return TurnFraction(a.num_ * (l / a.den_) + b.num_ * (l / b.den_), l);
}

std::strong_ordering operator<=>(const TurnFraction& a, const TurnFraction& b) {
    // both in [0,1) with positive denominators
    return a.num_ * b.den_ <=> b.num_ * a.den_;
}

cplx TurnFraction::realize() const { return unit_turn(num_, den_); }

std::string TurnFraction::str() const {
    if (num_ == 0) return "0";
    return std::to_string(num_) + "/" + std::to_string(den_);
}

TurnFraction TurnFraction::parse(const std::string& text) {
    const auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const long long n = std::stoll(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return TurnFraction(n, 1);
        }
        const std::string ns = text.substr(0, slash);
        const std::string ds = text.substr(slash + 1);
        const long long n = std::stoll(ns, &used);
        if (used != ns.size()) throw std::invalid_argument(text);
        const long long d = std::stoll(ds, &used);
        if (used != ds.size()) throw std::invalid_argument(text);
        if (d == 0) throw std::invalid_argument(text);
        if (d < 0) return TurnFraction(-n, -d);
        return TurnFraction(n, d);
    } catch (const std::logic_error&) {
        throw ParseError("not a turn fraction: '" + text + "'");
    }
}

cplx unit_turn(std::int64_t num, std::int64_t den) {
    num = floor_mod(num, den);
    // nearest quarter turn m, residual r = num/den - m/4 in [-1/8, 1/8]
    const std::int64_t m = (8 * num + den) / (2 * den);
    const std::int64_t rnum = 4 * num - m * den;  // residual = rnum / (4 den)
    double c;
    double s;
    if (rnum == 0) {
        c = 1.0;
        s = 0.0;
    } else if (2 * rnum == den || -2 * rnum == den) {
        c = std::sqrt(0.5);
        s = rnum > 0 ? c : -c;
    } else {
        const double phi = kTwoPi * static_cast<double>(rnum) / (4.0 * static_cast<double>(den));
        c = std::cos(phi);
        s = std::sin(phi);
    }
    switch (floor_mod(m, 4)) {
        case 0: return {c, s};
        case 1: return {-s, c};
        case 2: return {-c, -s};
        default: return {s, -c};
    }
}

cplx special_value(Special s) {
    switch (s) {
        case Special::d: {
            // root of d^2 - (1 - sqrt3) d + 1 = 0 in the upper half plane
            const double r3 = std::sqrt(3.0);
            return {(1.0 - r3) / 2.0, std::sqrt(r3 / 2.0)};
        }
        case Special::b1:
            // cos(2π c1) = sqrt(2/3), c1 in (0, 1/4)
            return {std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0)};
        case Special::b2: {
            // tan(2π c2) = -2, c2 in (1/4, 1/2)
            const double r5 = std::sqrt(5.0);
            return {-1.0 / r5, 2.0 / r5};
        }
    }
    return {1.0, 0.0};
}

double special_turn(Special s) {
    const cplx v = special_value(s);
    return frac(std::atan2(v.imag(), v.real()) / kTwoPi);
}

std::string special_name(Special s) {
    switch (s) {
        case Special::d: return "d";
        case Special::b1: return "b1";
        case Special::b2: return "b2";
    }
    return "?";
}

std::optional<Special> special_from_name(const std::string& name) {
    if (name == "d") return Special::d;
    if (name == "b1") return Special::b1;
    if (name == "b2") return Special::b2;
    return std::nullopt;
}

cplx SpecialPower::realize() const {
    const cplx base_value = special_value(base);
    cplx acc{1.0, 0.0};
    const cplx step = power >= 0 ? base_value : std::conj(base_value);
    for (int i = 0; i < std::abs(power); ++i) acc *= step;
    return acc;
}

double SpecialPower::turn() const { return power * special_turn(base); }

PhaseValue::PhaseValue(SpecialProduct s) {
    if (s.constant.power == 0)
        kind_ = RationalRoot{s.turn};
    else
        kind_ = s;
}

cplx PhaseValue::realize() const {
    return std::visit(
        [](const auto& k) -> cplx {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, RationalRoot>) {
                return k.turn.realize();
            } else if constexpr (std::is_same_v<T, SpecialProduct>) {
                return k.constant.realize() * k.turn.realize();
            } else {
                return std::polar(1.0, k.angle);
            }
        },
        kind_);
}

double PhaseValue::turn() const {
    return std::visit(
        [](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, RationalRoot>) {
                return k.turn.value();
            } else if constexpr (std::is_same_v<T, SpecialProduct>) {
                return frac(k.turn.value() + k.constant.turn());
            } else {
                return frac(k.angle / kTwoPi);
            }
        },
        kind_);
}

PhaseValue PhaseValue::conj() const {
    return std::visit(
        [](const auto& k) -> PhaseValue {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, RationalRoot>) {
                return RationalRoot{-k.turn};
            } else if constexpr (std::is_same_v<T, SpecialProduct>) {
                return SpecialProduct{SpecialPower{k.constant.base, -k.constant.power}, -k.turn};
            } else {
                return FloatPhase{-k.angle};
            }
        },
        kind_);
}

PhaseValue operator*(const PhaseValue& a, const PhaseValue& b) {
    const auto* ra = std::get_if<RationalRoot>(&a.kind_);
    const auto* rb = std::get_if<RationalRoot>(&b.kind_);
    const auto* sa = std::get_if<SpecialProduct>(&a.kind_);
    const auto* sb = std::get_if<SpecialProduct>(&b.kind_);
    if (ra && rb) return RationalRoot{ra->turn + rb->turn};
    if (sa && rb) return SpecialProduct{sa->constant, sa->turn + rb->turn};
    if (ra && sb) return SpecialProduct{sb->constant, ra->turn + sb->turn};
    if (sa && sb && sa->constant.base == sb->constant.base)
        return SpecialProduct{SpecialPower{sa->constant.base, sa->constant.power + sb->constant.power},
                              sa->turn + sb->turn};
    return FloatPhase{kTwoPi * frac(a.turn() + b.turn())};
}

bool operator==(const PhaseValue& a, const PhaseValue& b) {
    if (a.kind_.index() != b.kind_.index()) return false;
    if (const auto* fa = std::get_if<FloatPhase>(&a.kind_)) {
        const auto& fb = std::get<FloatPhase>(b.kind_);
        double diff = std::remainder(fa->angle - fb.angle, kTwoPi);
        return std::abs(diff) <= 1e-12;
    }
    if (const auto* ra = std::get_if<RationalRoot>(&a.kind_)) return *ra == std::get<RationalRoot>(b.kind_);
    return std::get<SpecialProduct>(a.kind_) == std::get<SpecialProduct>(b.kind_);
}

std::string PhaseValue::turn_label() const {
    return std::visit(
        [](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, RationalRoot>) {
                return k.turn.str();
            } else if constexpr (std::is_same_v<T, SpecialProduct>) {
                std::string c = "c" + std::string(k.constant.base == Special::d    ? "d"
                                                  : k.constant.base == Special::b1 ? "1"
                                                                                   : "2");
                std::string term;
                const int p = k.constant.power;
                if (p == 1)
                    term = c;
                else if (p == -1)
                    term = "-" + c;
                else
                    term = std::to_string(p) + c;
                if (k.turn.num() == 0) return term;
                return k.turn.str() + (term.front() == '-' ? term : "+" + term);
            } else {
                std::ostringstream os;
                os.precision(9);
                os << frac(k.angle / kTwoPi);
                return os.str();
            }
        },
        kind_);
}

PhaseValue PhaseValue::parse_turn_label(const std::string& text) {
    const auto bad = [&text]() { return ParseError("not a phase turn: '" + text + "'"); };
    if (text.empty()) throw bad();
    // split into signed terms
    std::vector<std::string> terms;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= text.size(); ++i)
        if (i == text.size() || text[i] == '+' || text[i] == '-') {
            terms.push_back(text.substr(start, i - start));
            start = i;
        }
    TurnFraction turn;
    std::optional<Special> base;
    int power = 0;
    for (std::string t : terms) {
        if (!t.empty() && t.front() == '+') t.erase(0, 1);
        if (t.empty() || t == "-") throw bad();
        const auto c = t.find('c');
        if (c == std::string::npos) {
            if (t.find('.') != std::string::npos) {
                if (terms.size() != 1) throw bad();
                try {
                    std::size_t used = 0;
                    const double x = std::stod(t, &used);
                    if (used != t.size()) throw bad();
                    return from_turn(x);
                } catch (const std::logic_error&) {
                    throw bad();
                }
            }
            turn += TurnFraction::parse(t);
            continue;
        }
        const std::string coeff = t.substr(0, c);
        const std::string name = t.substr(c + 1);
        Special s;
        if (name == "d")
            s = Special::d;
        else if (name == "1")
            s = Special::b1;
        else if (name == "2")
            s = Special::b2;
        else
            throw bad();
        if (base && *base != s) throw bad();
        base = s;
        int k = 1;
        if (coeff == "-")
            k = -1;
        else if (!coeff.empty()) {
            try {
                std::size_t used = 0;
                k = std::stoi(coeff, &used);
                if (used != coeff.size()) throw bad();
            } catch (const std::logic_error&) {
                throw bad();
            }
        }
        power += k;
    }
    if (!base || power == 0) return RationalRoot{turn};
    return special(*base, power, turn);
}

}  // namespace hmk
