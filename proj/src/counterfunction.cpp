#include "tmlab/counterfunction.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "tmlab/errors.hpp"

namespace tmlab {

using NodePtr = std::shared_ptr<const Counterfunction::Node>;

struct Counterfunction::Node {
    Kind kind;
    std::vector<BigNat> params;
    std::vector<NodePtr> children;
    bool monotone = true;
    bool bivariate = false;
    // f is nondecreasing on [settle, ∞) in its first argument.
    std::uint64_t settle = 0;
};

namespace {

constexpr std::uint64_t kSettleSearchLimit = 1'000'000;
constexpr std::uint64_t kExactCap = std::uint64_t{1} << 32;

struct Env {
    const RateValue& x;
    const RateValue* y;
};

std::string node_text(const Counterfunction::Node& n);

std::string short_text(const Counterfunction::Node& n) {
    std::string s = node_text(n);
    if (s.size() > 160) s = s.substr(0, 157) + "...";
    return s;
}

RateValue eval_node(const Counterfunction::Node& n, const Env& env, std::uint64_t cap);

RateValue eval_at(const Counterfunction::Node& n, const RateValue& x, const RateValue* y, std::uint64_t cap) {
    return eval_node(n, Env{x, y}, cap);
}

std::uint64_t to_u64(const BigNat& v, const char* what) {
    if (bit_length(v) > 63) throw InvalidInput(std::string(what) + " does not fit in 64 bits");
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, v.get_mpz_t());
    return out;
}

RateValue overflow(const Counterfunction::Node& n, const Env& env, std::uint64_t cap) {
    return RateValue::astronomical(short_text(n) + "(" + env.x.brief() + ")", cap);
}

RateValue eval_node(const Counterfunction::Node& n, const Env& env, std::uint64_t cap) {
    using K = Counterfunction::Kind;
    const RateValue& x = env.x;
    switch (n.kind) {
        case K::Const:
            return rate_arith::capped(n.params[0], cap, short_text(n));
        case K::Identity:
            return x;
        case K::Arg2:
            if (env.y == nullptr) throw InvalidInput("arg2 evaluated without a second argument");
            return *env.y;
        case K::Affine: {
            const BigNat& a = n.params[0];
            const BigNat& b = n.params[1];
            if (a == 0) return rate_arith::capped(b, cap, short_text(n));
            if (x.is_astronomical()) return overflow(n, env, cap);
            if (bit_length(a) + bit_length(x.value()) > cap + 1) return overflow(n, env, cap);
            return rate_arith::capped(a * x.value() + b, cap, short_text(n) + "(" + x.brief() + ")");
        }
        case K::Power: {
            if (x.is_astronomical()) return overflow(n, env, cap);
            const BigNat& v = x.value();
            if (v <= 1) return x;
            const std::uint64_t e = to_u64(n.params[0], "exponent");
            const std::uint64_t bits = bit_length(v);
            if ((bits - 1) > cap / e) return overflow(n, env, cap);
            BigNat out;
            mpz_pow_ui(out.get_mpz_t(), v.get_mpz_t(), e);
            return rate_arith::capped(std::move(out), cap, short_text(n) + "(" + x.brief() + ")");
        }
        case K::Max: {
            RateValue best = eval_node(*n.children[0], env, cap);
            for (std::size_t i = 1; i < n.children.size(); ++i)
                best = rate_arith::max(best, eval_node(*n.children[i], env, cap));
            return best;
        }
        case K::Sum: {
            RateValue acc = eval_node(*n.children[0], env, cap);
            for (std::size_t i = 1; i < n.children.size(); ++i)
                acc = rate_arith::add(acc, eval_node(*n.children[i], env, cap), cap);
            return acc.relabeled(short_text(n) + "(" + x.brief() + ")");
        }
        case K::Product: {
            RateValue acc = eval_node(*n.children[0], env, cap);
            for (std::size_t i = 1; i < n.children.size(); ++i)
                acc = rate_arith::mul(acc, eval_node(*n.children[i], env, cap), cap);
            return acc.relabeled(short_text(n) + "(" + x.brief() + ")");
        }
        case K::Pred:
            return rate_arith::pred(eval_node(*n.children[0], env, cap));
        case K::Compose: {
            const RateValue inner = eval_node(*n.children[1], env, cap);
            return eval_at(*n.children[0], inner, env.y, cap);
        }
        case K::Apply2: {
            const RateValue first = eval_node(*n.children[1], env, cap);
            const RateValue second = eval_node(*n.children[2], env, cap);
            return eval_at(*n.children[0], first, &second, cap);
        }
        case K::Table: {
            const auto& t = n.params;
            if (x.is_astronomical() || x.value() >= t.size()) return rate_arith::capped(t.back(), cap, "table");
            return rate_arith::capped(t[x.value().get_ui()], cap, "table");
        }
        case K::Monotonize: {
            const auto& child = *n.children[0];
            const std::uint64_t s = child.settle;
            const bool within = x.is_finite() && x.value() <= s;
            const std::uint64_t upto = within ? x.value().get_ui() : s;
            RateValue best = eval_at(child, RateValue(0), env.y, cap);
            for (std::uint64_t i = 1; i <= upto; ++i) best = rate_arith::max(best, eval_at(child, RateValue(i), env.y, cap));
            if (!within) best = rate_arith::max(best, eval_node(child, env, cap));
            return best;
        }
        case K::CeilLnOfLinear: {
            const BigNat& a = n.params[0];
            const BigNat& b = n.params[1];
            if (a == 0) return RateValue(ceil_ln(b));
            if (x.is_astronomical()) return overflow(n, env, cap);
            return RateValue(ceil_ln(a * x.value() + b));
        }
        case K::CeilExp: {
            const BigNat& c = n.params[0];
            if (c == 0) return RateValue(0);
            if (x.is_astronomical()) return overflow(n, env, cap);
            const BigNat& v = x.value();
            // log2(c e^v) ≥ 1.44 v: reject before building a huge float.
            if (bit_length(v) > 62 || static_cast<double>(v.get_ui()) * 1.4426950408889634 > static_cast<double>(cap) + 1)
                return overflow(n, env, cap);
            return rate_arith::capped(ceil_c_exp(c, v.get_ui()), cap, short_text(n) + "(" + x.brief() + ")");
        }
    }
    throw std::logic_error("unhandled counterfunction node");
}

std::string join_children(const Counterfunction::Node& n) {
    std::string s;
    for (std::size_t i = 0; i < n.children.size(); ++i) s += (i ? "," : "") + node_text(*n.children[i]);
    return s;
}

std::string node_text(const Counterfunction::Node& n) {
    using K = Counterfunction::Kind;
    switch (n.kind) {
        case K::Const: return "const:" + n.params[0].get_str();
        case K::Identity: return "id";
        case K::Arg2: return "arg2";
        case K::Affine: return "affine:" + n.params[0].get_str() + "," + n.params[1].get_str();
        case K::Power: return "pow:" + n.params[0].get_str();
        case K::Max: return "max(" + join_children(n) + ")";
        case K::Sum: return "sum(" + join_children(n) + ")";
        case K::Product: return "mul(" + join_children(n) + ")";
        case K::Pred: return "pred(" + join_children(n) + ")";
        case K::Compose: return "comp(" + join_children(n) + ")";
        case K::Apply2: return "app2(" + join_children(n) + ")";
        case K::Table: {
            std::string s = "table:[";
            for (std::size_t i = 0; i < n.params.size(); ++i) s += (i ? "," : "") + n.params[i].get_str();
            return s + "]";
        }
        case K::Monotonize: return "mono(" + join_children(n) + ")";
        case K::CeilLnOfLinear: return "lnceil:" + n.params[0].get_str() + "," + n.params[1].get_str();
        case K::CeilExp: return "expceil:" + n.params[0].get_str();
    }
    return "?";
}

NodePtr make(Counterfunction::Kind kind, std::vector<BigNat> params, std::vector<NodePtr> children) {
    using K = Counterfunction::Kind;
    auto n = std::make_shared<Counterfunction::Node>();
    n->kind = kind;
    n->params = std::move(params);
    n->children = std::move(children);
    for (const auto& c : n->children) {
        n->monotone = n->monotone && c->monotone;
        n->bivariate = n->bivariate || c->bivariate;
    }
    if (kind == K::Arg2) n->bivariate = true;
    if (kind == K::Table) n->monotone = std::is_sorted(n->params.begin(), n->params.end());
    if (kind == K::Monotonize) n->monotone = true;

    if (n->monotone) {
        n->settle = 0;
    } else if (kind == K::Table) {
        n->settle = n->params.size() - 1;
    } else if (kind == K::Compose) {
        const auto& outer = *n->children[0];
        const auto& inner = *n->children[1];
        if (outer.monotone) {
            n->settle = inner.settle;
        } else {
            // Past the point where inner reaches outer's monotone tail, outer∘inner is nondecreasing.
            std::uint64_t x = inner.settle;
            try {
                const RateValue target(outer.settle);
                while (x <= kSettleSearchLimit && eval_at(inner, RateValue(x), nullptr, kDefaultBitCap) < target) ++x;
            } catch (const InvalidInput&) {
                throw InvalidInput("cannot determine the monotone tail of " + node_text(*n));
            }
            if (x > kSettleSearchLimit) throw InvalidInput("cannot determine the monotone tail of " + node_text(*n));
            n->settle = x;
        }
    } else if (kind == K::Apply2) {
        if (!n->children[0]->monotone)
            throw InvalidInput("app2 requires a monotone outer function: " + node_text(*n));
        n->settle = std::max(n->children[1]->settle, n->children[2]->settle);
    } else {
        for (const auto& c : n->children) n->settle = std::max(n->settle, c->settle);
    }
    if (n->settle > kSettleSearchLimit) throw InvalidInput("non-monotone prefix too long to monotonize");
    return n;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse_all() {
        NodePtr n = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw InvalidInput("counterfunction parse error at position " + std::to_string(pos_) + " in '" +
                           std::string(text_) + "': " + msg);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    std::string ident() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a function name");
        return std::string(text_.substr(start, pos_ - start));
    }

    BigNat natural() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a natural number");
        return BigNat(std::string(text_.substr(start, pos_ - start)), 10);
    }

    std::vector<NodePtr> args(std::size_t min, std::size_t max) {
        expect('(');
        std::vector<NodePtr> out{parse_expr()};
        while (accept(',')) out.push_back(parse_expr());
        expect(')');
        if (out.size() < min || out.size() > max) fail("wrong number of arguments");
        return out;
    }

    NodePtr parse_expr() {
        using K = Counterfunction::Kind;
        const std::string name = ident();
        if (name == "id") return make(K::Identity, {}, {});
        if (name == "arg2") return make(K::Arg2, {}, {});
        if (name == "const") {
            expect(':');
            return make(K::Const, {natural()}, {});
        }
        if (name == "pow") {
            expect(':');
            BigNat e = natural();
            if (e < 1) fail("pow exponent must be >= 1");
            return make(K::Power, {e}, {});
        }
        if (name == "expceil") {
            expect(':');
            return make(K::CeilExp, {natural()}, {});
        }
        if (name == "affine" || name == "lnceil") {
            expect(':');
            BigNat a = natural();
            expect(',');
            BigNat b = natural();
            return make(name == "affine" ? K::Affine : K::CeilLnOfLinear, {a, b}, {});
        }
        if (name == "table") {
            expect(':');
            expect('[');
            std::vector<BigNat> values{natural()};
            while (accept(',')) values.push_back(natural());
            expect(']');
            return make(K::Table, std::move(values), {});
        }
        constexpr std::size_t many = static_cast<std::size_t>(-1);
        if (name == "max") return make(K::Max, {}, args(1, many));
        if (name == "sum") return make(K::Sum, {}, args(1, many));
        if (name == "mul") return make(K::Product, {}, args(1, many));
        if (name == "pred") return make(K::Pred, {}, args(1, 1));
        if (name == "mono") return make(K::Monotonize, {}, args(1, 1));
        if (name == "comp") return make(K::Compose, {}, args(2, 2));
        if (name == "app2") return make(K::Apply2, {}, args(3, 3));
        fail("unknown function '" + name + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------

Counterfunction Counterfunction::constant(BigNat c) { return Counterfunction(make(Kind::Const, {std::move(c)}, {})); }
Counterfunction Counterfunction::identity() { return Counterfunction(make(Kind::Identity, {}, {})); }
Counterfunction Counterfunction::arg2() { return Counterfunction(make(Kind::Arg2, {}, {})); }

Counterfunction Counterfunction::affine(BigNat a, BigNat b) {
    return Counterfunction(make(Kind::Affine, {std::move(a), std::move(b)}, {}));
}

Counterfunction Counterfunction::power(std::uint64_t exponent) {
    if (exponent < 1) throw InvalidInput("power exponent must be >= 1");
    return Counterfunction(make(Kind::Power, {big(exponent)}, {}));
}

Counterfunction Counterfunction::max(std::vector<Counterfunction> children) {
    return Counterfunction(make(Kind::Max, {}, nodes_of(children, "max")));
}

Counterfunction Counterfunction::sum(std::vector<Counterfunction> children) {
    return Counterfunction(make(Kind::Sum, {}, nodes_of(children, "sum")));
}

Counterfunction Counterfunction::product(std::vector<Counterfunction> children) {
    return Counterfunction(make(Kind::Product, {}, nodes_of(children, "mul")));
}

Counterfunction Counterfunction::pred(Counterfunction child) {
    return Counterfunction(make(Kind::Pred, {}, {child.node_}));
}

Counterfunction Counterfunction::compose(Counterfunction outer, Counterfunction inner) {
    return Counterfunction(make(Kind::Compose, {}, {outer.node_, inner.node_}));
}

Counterfunction Counterfunction::apply2(Counterfunction outer, Counterfunction first, Counterfunction second) {
    return Counterfunction(make(Kind::Apply2, {}, {outer.node_, first.node_, second.node_}));
}

Counterfunction Counterfunction::table(std::vector<BigNat> values) {
    if (values.empty()) throw InvalidInput("table needs at least one value");
    return Counterfunction(make(Kind::Table, std::move(values), {}));
}

Counterfunction Counterfunction::monotonize(Counterfunction child) {
    return Counterfunction(make(Kind::Monotonize, {}, {child.node_}));
}

Counterfunction Counterfunction::ceil_ln_of_linear(BigNat a, BigNat b) {
    return Counterfunction(make(Kind::CeilLnOfLinear, {std::move(a), std::move(b)}, {}));
}

Counterfunction Counterfunction::ceil_exp(BigNat c) { return Counterfunction(make(Kind::CeilExp, {std::move(c)}, {})); }

Counterfunction Counterfunction::parse(std::string_view text) { return Counterfunction(Parser(text).parse_all()); }

Counterfunction::Kind Counterfunction::kind() const { return node_->kind; }
std::string Counterfunction::to_string() const { return node_text(*node_); }
bool Counterfunction::is_monotone() const { return node_->monotone; }
bool Counterfunction::is_bivariate() const { return node_->bivariate; }

RateValue Counterfunction::operator()(const RateValue& n, const EvalOptions& opts) const {
    return eval_node(*node_, Env{n, nullptr}, opts.bit_cap);
}

RateValue Counterfunction::operator()(const RateValue& m, const RateValue& k, const EvalOptions& opts) const {
    return eval_node(*node_, Env{m, &k}, opts.bit_cap);
}

BigNat Counterfunction::eval(const BigNat& n) const {
    RateValue v = eval_node(*node_, Env{RateValue(n), nullptr}, kExactCap);
    if (v.is_astronomical()) throw std::overflow_error("counterfunction value exceeds 2^32 bits: " + v.to_string());
    return v.value();
}

Counterfunction Counterfunction::bind_second(const BigNat& k) const {
    return apply2(*this, identity(), constant(k));
}

std::vector<NodePtr> Counterfunction::nodes_of(const std::vector<Counterfunction>& fs, const char* what) {
    if (fs.empty()) throw InvalidInput(std::string(what) + " needs at least one argument");
    std::vector<NodePtr> out;
    out.reserve(fs.size());
    for (const auto& f : fs) out.push_back(f.node_);
    return out;
}

Counterfunction monotonized(const Counterfunction& f) {
    if (f.is_monotone()) return f;
    return Counterfunction::monotonize(f);
}

RateValue iterate(const Counterfunction& f, const BigNat& m, const RateValue& start, std::uint64_t bit_cap) {
    const EvalOptions opts{bit_cap};
    RateValue cur = start;
    for (BigNat i = 0; i < m; ++i) {
        RateValue next = f(cur, opts);
        if (next == cur) break;  // fixed point (includes Astronomical ↦ Astronomical)
        cur = std::move(next);
    }
    return cur;
}

}  // namespace tmlab
