#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <variant>

#include <gmpxx.h>

namespace tmlab {

using BigNat = mpz_class;

/// Default representation limit for explicit rate values: 2^20 bits.
inline constexpr std::uint64_t kDefaultBitCap = std::uint64_t{1} << 20;

std::uint64_t bit_length(const BigNat& v);
BigNat big(std::uint64_t v);
/// Parses a nonnegative decimal string; throws InvalidInput otherwise.
BigNat parse_big(const std::string& text);

/// A rate bound: either an explicit big natural or the Astronomical sentinel,
/// which records the defining expression and the bit cap it exceeded.
/// Astronomical compares greater than every finite value and equal to itself.
class RateValue {
public:
    RateValue() : value_(BigNat(0)) {}
    RateValue(BigNat v);  // NOLINT(google-explicit-constructor)
    RateValue(std::uint64_t v) : RateValue(big(v)) {}  // NOLINT(google-explicit-constructor)
    RateValue(int v);  // NOLINT(google-explicit-constructor)

    static RateValue astronomical(std::string expression, std::uint64_t bit_cap);

    bool is_finite() const noexcept { return std::holds_alternative<BigNat>(value_); }
    bool is_astronomical() const noexcept { return !is_finite(); }

    /// Throws std::logic_error on Astronomical.
    const BigNat& value() const;
    /// Expression text of an Astronomical value (empty when finite).
    std::string expression() const;
    std::uint64_t bit_cap() const;

    /// Replaces the expression text of an Astronomical value; no-op when finite.
    RateValue relabeled(const std::string& expression) const;

    /// Decimal digits, or "ASTRO:<expression>".
    std::string to_string() const;
    /// Short form for diagnostics: full decimal up to 40 digits, else "<N-bit>".
    std::string brief() const;

    friend std::strong_ordering operator<=>(const RateValue& a, const RateValue& b);
    friend bool operator==(const RateValue& a, const RateValue& b) { return (a <=> b) == 0; }

private:
    struct Astro {
        std::string expression;
        std::uint64_t bit_cap = 0;
    };
    std::variant<BigNat, Astro> value_;
};

/// Arithmetic that saturates into Astronomical once a result exceeds `cap` bits.
/// Any Astronomical operand yields Astronomical, except multiplication by 0.
namespace rate_arith {

RateValue capped(BigNat v, std::uint64_t cap, const std::string& expression);
RateValue add(const RateValue& a, const RateValue& b, std::uint64_t cap);
RateValue mul(const RateValue& a, const RateValue& b, std::uint64_t cap);
/// max(a - 1, 0).
RateValue pred(const RateValue& a);
RateValue max(const RateValue& a, const RateValue& b);

}  // namespace rate_arith

/// ⌈ln v⌉ with ln 0 := 0; boundary ties resolve upward.
BigNat ceil_ln(const BigNat& v);
/// ⌈c · e^n⌉, rounded up.
BigNat ceil_c_exp(const BigNat& c, std::uint64_t n);

}  // namespace tmlab
