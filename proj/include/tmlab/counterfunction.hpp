#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tmlab/rate_value.hpp"

namespace tmlab {

struct EvalOptions {
    std::uint64_t bit_cap = kDefaultBitCap;
};

/// A total function ℕ → ℕ (optionally ℕ × ℕ → ℕ through the `arg2` leaf),
/// stored as an immutable expression tree over big naturals.
///
/// Mini-grammar (round-trips through parse/to_string):
///
///     const:C   id   arg2   affine:a,b   pow:e   lnceil:a,b   expceil:c
///     table:[v0,v1,...]   max(f,g,...)   sum(f,g,...)   mul(f,g,...)
///     pred(f)   mono(f)   comp(f,g)   app2(f,g,h)
///
/// `comp(f,g)` is f∘g. `app2(f,g,h)(n) = f(g(n), h(n))`, evaluating f with
/// `id` bound to g(n) and `arg2` bound to h(n). `lnceil:a,b` is ⌈ln(a·n + b)⌉,
/// `expceil:c` is ⌈c·eⁿ⌉, `pred(f)` is max(f - 1, 0), and a table is extended
/// by its last value.
///
/// Evaluation accepts Astronomical arguments: constant-tail nodes (const,
/// table, affine with a = 0) still produce finite values, everything else
/// saturates. Any intermediate above the bit cap becomes Astronomical.
class Counterfunction {
public:
    enum class Kind {
        Const,
        Identity,
        Arg2,
        Affine,
        Power,
        Max,
        Sum,
        Product,
        Pred,
        Compose,
        Apply2,
        Table,
        Monotonize,
        CeilLnOfLinear,
        CeilExp,
    };

    static Counterfunction constant(BigNat c);
    static Counterfunction identity();
    static Counterfunction arg2();
    static Counterfunction affine(BigNat a, BigNat b);
    static Counterfunction power(std::uint64_t exponent);
    static Counterfunction max(std::vector<Counterfunction> children);
    static Counterfunction sum(std::vector<Counterfunction> children);
    static Counterfunction product(std::vector<Counterfunction> children);
    static Counterfunction pred(Counterfunction child);
    static Counterfunction compose(Counterfunction outer, Counterfunction inner);
    static Counterfunction apply2(Counterfunction outer, Counterfunction first, Counterfunction second);
    static Counterfunction table(std::vector<BigNat> values);
    static Counterfunction monotonize(Counterfunction child);
    static Counterfunction ceil_ln_of_linear(BigNat a, BigNat b);
    static Counterfunction ceil_exp(BigNat c);

    /// Throws InvalidInput with the offending position on malformed text.
    static Counterfunction parse(std::string_view text);

    Kind kind() const;
    std::string to_string() const;

    /// Structurally nondecreasing in its first argument.
    bool is_monotone() const;
    /// Uses the `arg2` leaf anywhere.
    bool is_bivariate() const;

    RateValue operator()(const RateValue& n, const EvalOptions& opts = {}) const;
    RateValue operator()(const RateValue& m, const RateValue& k, const EvalOptions& opts = {}) const;
    /// Exact evaluation; throws std::overflow_error beyond 2^32 bits.
    BigNat eval(const BigNat& n) const;

    /// n ↦ f(n, k).
    Counterfunction bind_second(const BigNat& k) const;

    struct Node;

private:
    explicit Counterfunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static std::vector<std::shared_ptr<const Node>> nodes_of(const std::vector<Counterfunction>& fs,
                                                             const char* what);

    std::shared_ptr<const Node> node_;
};

/// f^M(k) = max_{i ≤ k} f(i). Returns f itself when f is already structurally monotone.
Counterfunction monotonized(const Counterfunction& f);

/// f^{(m)}(start); Astronomical as soon as an intermediate exceeds the cap and
/// stays so unless f maps Astronomical back to a finite value. Stops early at
/// a fixed point.
RateValue iterate(const Counterfunction& f, const BigNat& m, const RateValue& start,
                  std::uint64_t bit_cap = kDefaultBitCap);

}  // namespace tmlab
