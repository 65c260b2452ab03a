#include "tmlab/rate_value.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <mpfr.h>

#include "tmlab/errors.hpp"

namespace tmlab {

namespace {

std::string sanitize(std::string s) {
    // Astronomical text ends up inside CSV cells.
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

// RAII wrapper for an MPFR float.
class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_ptr get() { return v_; }

private:
    mpfr_t v_;
};

BigNat ceil_of(mpfr_ptr x) {
    BigNat out;
    mpfr_get_z(out.get_mpz_t(), x, MPFR_RNDU);
    return out;
}

}  // namespace

std::uint64_t bit_length(const BigNat& v) {
    if (v == 0) return 0;
    return mpz_sizeinbase(v.get_mpz_t(), 2);
}

BigNat big(std::uint64_t v) {
    BigNat out;
    mpz_import(out.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return out;
}

BigNat parse_big(const std::string& text) {
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw InvalidInput("expected a natural number, got '" + text + "'");
    return BigNat(text, 10);
}

RateValue::RateValue(BigNat v) : value_(std::move(v)) {
    if (std::get<BigNat>(value_) < 0) throw InvalidInput("rate values are natural numbers");
}

RateValue::RateValue(int v) : RateValue(BigNat(v)) {}

RateValue RateValue::astronomical(std::string expression, std::uint64_t bit_cap) {
    RateValue r;
    r.value_ = Astro{sanitize(std::move(expression)), bit_cap};
    return r;
}

const BigNat& RateValue::value() const {
    if (const auto* v = std::get_if<BigNat>(&value_)) return *v;
    throw std::logic_error("value() on an Astronomical rate: " + to_string());
}

std::string RateValue::expression() const {
    if (const auto* a = std::get_if<Astro>(&value_)) return a->expression;
    return {};
}

std::uint64_t RateValue::bit_cap() const {
    if (const auto* a = std::get_if<Astro>(&value_)) return a->bit_cap;
    return 0;
}

RateValue RateValue::relabeled(const std::string& expression) const {
    if (is_finite()) return *this;
    return astronomical(expression + " [" + this->expression() + "]", bit_cap());
}

std::string RateValue::to_string() const {
    if (const auto* v = std::get_if<BigNat>(&value_)) return v->get_str();
    return "ASTRO:" + std::get<Astro>(value_).expression;
}

std::string RateValue::brief() const {
    if (const auto* v = std::get_if<BigNat>(&value_)) {
        if (bit_length(*v) <= 128) return v->get_str();
        return "<" + std::to_string(bit_length(*v)) + "-bit>";
    }
    return "ASTRO";
}

std::strong_ordering operator<=>(const RateValue& a, const RateValue& b) {
    if (a.is_astronomical() || b.is_astronomical()) {
        return a.is_astronomical() <=> b.is_astronomical();
    }
    const int c = cmp(a.value(), b.value());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

namespace rate_arith {

RateValue capped(BigNat v, std::uint64_t cap, const std::string& expression) {
    if (bit_length(v) > cap) return RateValue::astronomical(expression, cap);
    return RateValue(std::move(v));
}

RateValue add(const RateValue& a, const RateValue& b, std::uint64_t cap) {
    if (a.is_astronomical()) return a;
    if (b.is_astronomical()) return b;
    return capped(a.value() + b.value(), cap, a.brief() + "+" + b.brief());
}

RateValue mul(const RateValue& a, const RateValue& b, std::uint64_t cap) {
    const bool a_zero = a.is_finite() && a.value() == 0;
    const bool b_zero = b.is_finite() && b.value() == 0;
    if (a_zero || b_zero) return RateValue(0);
    if (a.is_astronomical()) return a;
    if (b.is_astronomical()) return b;
    const std::string expr = a.brief() + "*" + b.brief();
    // Product has at least bits(a) + bits(b) - 1 bits; skip the multiplication if that is already too many.
    if (bit_length(a.value()) + bit_length(b.value()) - 1 > cap) return RateValue::astronomical(expr, cap);
    return capped(a.value() * b.value(), cap, expr);
}

RateValue pred(const RateValue& a) {
    if (a.is_astronomical() || a.value() == 0) return a;
    return RateValue(BigNat(a.value() - 1));
}

RateValue max(const RateValue& a, const RateValue& b) { return (a < b) ? b : a; }

}  // namespace rate_arith

BigNat ceil_ln(const BigNat& v) {
    if (v <= 1) return 0;
    const auto bits = static_cast<mpfr_prec_t>(bit_length(v));
    // ln v < bits; enough mantissa to resolve the integer part plus a margin.
    for (mpfr_prec_t prec = 96 + bit_length(big(bits)); prec <= 1 << 16; prec *= 4) {
        Mpfr lo(prec), hi(prec);
        mpfr_set_z(lo.get(), v.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(hi.get(), v.get_mpz_t(), MPFR_RNDU);
        mpfr_log(lo.get(), lo.get(), MPFR_RNDD);
        mpfr_log(hi.get(), hi.get(), MPFR_RNDU);
        BigNat c_lo = ceil_of(lo.get());
        BigNat c_hi = ceil_of(hi.get());
        if (c_lo == c_hi) return c_hi;
        if (prec * 4 > (1 << 16)) return c_hi;
    }
    throw std::logic_error("ceil_ln: precision loop exhausted");
}

BigNat ceil_c_exp(const BigNat& c, std::uint64_t n) {
    if (c == 0) return 0;
    const double est_bits = static_cast<double>(n) * 1.4426950408889634 + static_cast<double>(bit_length(c));
    for (mpfr_prec_t prec = static_cast<mpfr_prec_t>(est_bits) + 96;; prec *= 2) {
        Mpfr lo(prec), hi(prec), cl(prec), ch(prec);
        mpfr_set_ui(lo.get(), n, MPFR_RNDD);
        mpfr_set_ui(hi.get(), n, MPFR_RNDU);
        mpfr_exp(lo.get(), lo.get(), MPFR_RNDD);
        mpfr_exp(hi.get(), hi.get(), MPFR_RNDU);
        mpfr_set_z(cl.get(), c.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(ch.get(), c.get_mpz_t(), MPFR_RNDU);
        mpfr_mul(lo.get(), lo.get(), cl.get(), MPFR_RNDD);
        mpfr_mul(hi.get(), hi.get(), ch.get(), MPFR_RNDU);
        BigNat c_lo = ceil_of(lo.get());
        BigNat c_hi = ceil_of(hi.get());
        // c·e^n is irrational for n ≥ 1, so the bracket closes once precision suffices.
        if (c_lo == c_hi || n == 0) return c_hi;
        if (prec > static_cast<mpfr_prec_t>(est_bits) * 8 + 4096) return c_hi;
    }
}

}  // namespace tmlab
