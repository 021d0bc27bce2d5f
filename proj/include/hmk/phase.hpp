// Exact and floating unimodular phases.
//
// A phase is either a rational root of unity exp(2πi·k/n), a rational root
// multiplied by an integer power of one of the special algebraic constants
// d, b1, b2, or a plain floating angle. Exact kinds drive enumeration and
// deduplication; their float realization drives the linear algebra.
#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace hmk {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// A fraction of a full turn, normalized to 0 <= num < den with gcd(num, den) = 1.
class TurnFraction {
public:
    constexpr TurnFraction() = default;
    TurnFraction(std::int64_t num, std::int64_t den);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    /// Turn value in [0, 1).
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// exp(2πi·num/den), exact at multiples of 1/8 and within an ulp or so elsewhere.
    cplx realize() const;

    TurnFraction operator-() const;
    friend TurnFraction operator+(const TurnFraction& a, const TurnFraction& b);
    friend TurnFraction operator-(const TurnFraction& a, const TurnFraction& b) { return a + (-b); }
    TurnFraction& operator+=(const TurnFraction& o) { return *this = *this + o; }

    friend bool operator==(const TurnFraction&, const TurnFraction&) = default;
    friend std::strong_ordering operator<=>(const TurnFraction& a, const TurnFraction& b);

    /// "k/n", or "0" for the trivial turn.
    std::string str() const;

    /// Parses "k/n", "k" or "-k/n".
    static TurnFraction parse(const std::string& text);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

enum class Special { d, b1, b2 };

/// Integer power of one of the special constants; power -1 is the conjugate.
struct SpecialPower {
    Special base = Special::d;
    int power = 1;

    cplx realize() const;
    /// Turn angle of the constant raised to `power`, not reduced mod 1.
    double turn() const;
    friend bool operator==(const SpecialPower&, const SpecialPower&) = default;
    friend auto operator<=>(const SpecialPower&, const SpecialPower&) = default;
};

/// Unit-modulus realization of the base constant.
cplx special_value(Special s);
/// c in [0,1) with special_value(s) = exp(2πi c).
double special_turn(Special s);
std::string special_name(Special s);
std::optional<Special> special_from_name(const std::string& name);

struct RationalRoot {
    TurnFraction turn;
    friend bool operator==(const RationalRoot&, const RationalRoot&) = default;
};

struct SpecialProduct {
    SpecialPower constant;
    TurnFraction turn;
    friend bool operator==(const SpecialProduct&, const SpecialProduct&) = default;
};

struct FloatPhase {
    double angle = 0.0;  // radians
};

class PhaseValue {
public:
    using Kind = std::variant<RationalRoot, SpecialProduct, FloatPhase>;

    PhaseValue() : kind_(RationalRoot{}) {}
    PhaseValue(RationalRoot r) : kind_(r) {}
    PhaseValue(SpecialProduct s);
    PhaseValue(FloatPhase f) : kind_(f) {}

    static PhaseValue root(std::int64_t num, std::int64_t den) { return RationalRoot{TurnFraction(num, den)}; }
    static PhaseValue one() { return RationalRoot{}; }
    static PhaseValue special(Special s, int power = 1, TurnFraction turn = {}) {
        return SpecialProduct{SpecialPower{s, power}, turn};
    }
    static PhaseValue from_angle(double radians) { return FloatPhase{radians}; }
    /// Phase exp(2πi·x) for a real turn x.
    static PhaseValue from_turn(double x) { return FloatPhase{kTwoPi * x}; }

    const Kind& kind() const { return kind_; }
    bool is_exact() const { return !std::holds_alternative<FloatPhase>(kind_); }
    bool is_rational_root() const { return std::holds_alternative<RationalRoot>(kind_); }

    cplx realize() const;
    /// Turn in [0, 1) such that realize() = exp(2πi·turn).
    double turn() const;

    PhaseValue conj() const;
    /// Exact when both factors are rational or share one special base; float otherwise.
    friend PhaseValue operator*(const PhaseValue& a, const PhaseValue& b);

    /// Exact kinds compare by structure; float phases by angle mod 2π within 1e-12.
    friend bool operator==(const PhaseValue& a, const PhaseValue& b);

    /// Human readable turn, e.g. "1/6", "3/8+c2", "2c1", "0.123456".
    std::string turn_label() const;
    /// Inverse of turn_label for exact kinds: "1/6", "3/8+c2", "1/8-c1", "2c1", "-cd".
    /// A decimal such as "0.25" gives a float phase. Throws ParseError.
    static PhaseValue parse_turn_label(const std::string& text);

private:
    Kind kind_;
};

/// exp(2πi·num/den) with exact values at multiples of 1/8 turn.
cplx unit_turn(std::int64_t num, std::int64_t den);

}  // namespace hmk
