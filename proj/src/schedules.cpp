#include "tmlab/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>

#include "tmlab/errors.hpp"

namespace tmlab {

namespace {

mpq_class parse_rational(const std::string& s) {
    static const std::regex frac(R"(\s*(-?\d+)\s*/\s*(\d+)\s*)");
    static const std::regex dec(R"(\s*(-?)(\d+)(?:\.(\d+))?\s*)");
    std::smatch m;
    if (std::regex_match(s, m, frac)) {
        mpq_class q(mpz_class(m[1].str(), 10), mpz_class(m[2].str(), 10));
        if (q.get_den() == 0) throw InvalidInput("zero denominator in '" + s + "'");
        q.canonicalize();
        return q;
    }
    if (std::regex_match(s, m, dec)) {
        const std::string frac_digits = m[3].str();
        mpz_class num(m[2].str() + frac_digits, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_digits.size());
        mpq_class q(num, den);
        q.canonicalize();
        return m[1].str() == "-" ? mpq_class(-q) : q;
    }
    throw InvalidInput("expected a rational constant, got '" + s + "'");
}

double as_double(const BigNat& v) { return v.get_d(); }

nlohmann::json big_json(const RateValue& v) { return v.to_string(); }

}  // namespace

// ---------------------------------------------------------------------------
// RealSequence

RealSequence RealSequence::constant(const mpq_class& c) {
    RealSequence s;
    s.text_ = "const:" + c.get_str();
    const double d = c.get_d();
    s.fn_ = [d](std::uint64_t) { return d; };
    s.exact_ = [c](std::uint64_t) { return c; };
    return s;
}

RealSequence RealSequence::ratio(long a, long b, long c, long d) {
    RealSequence s;
    s.text_ = "ratio:" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "," + std::to_string(d);
    s.fn_ = [=](std::uint64_t n) {
        const double x = static_cast<double>(n);
        return (a * x + b) / (c * x + d);
    };
    s.exact_ = [=](std::uint64_t n) {
        const mpz_class nz = big(n);
        mpq_class q(a * nz + b, c * nz + d);
        if (q.get_den() == 0) throw InvalidInput("ratio sequence has a zero denominator at n = " + std::to_string(n));
        q.canonicalize();
        return q;
    };
    return s;
}

RealSequence RealSequence::custom(std::string text, std::function<double(std::uint64_t)> fn) {
    RealSequence s;
    s.text_ = std::move(text);
    s.fn_ = std::move(fn);
    return s;
}

RealSequence RealSequence::parse(std::string_view text) {
    const std::string t(text);
    if (t.rfind("const:", 0) == 0) return constant(parse_rational(t.substr(6)));
    static const std::regex ratio_re(R"(ratio:\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*)");
    std::smatch m;
    if (std::regex_match(t, m, ratio_re)) {
        return ratio(std::stol(m[1]), std::stol(m[2]), std::stol(m[3]), std::stol(m[4]));
    }
    throw InvalidInput("unknown sequence '" + t + "' (expected const:c or ratio:a,b,c,d)");
}

mpq_class RealSequence::exact(std::uint64_t n) const {
    if (!exact_) throw std::logic_error("sequence '" + text_ + "' has no exact form");
    return exact_(n);
}

// ---------------------------------------------------------------------------
// Bundles

ScheduleBundle finalize(ScheduleBundle b) {
    if (b.Lambda < 1) throw InvalidInput("Lambda must be >= 1");
    if (b.Gamma < 1) throw InvalidInput("Gamma must be >= 1");
    if (b.sigma.is_bivariate() || b.chi_beta.is_bivariate() || b.chi_lambda.is_bivariate() ||
        b.chi_gamma.is_bivariate() || b.eta.is_bivariate() || b.B.is_bivariate())
        throw InvalidInput("only sigma_star may use arg2");
    if (!b.sigma_star.is_monotone()) throw InvalidInput("sigma_star must be monotone");
    b.sigma = monotonized(b.sigma);
    b.chi_beta = monotonized(b.chi_beta);
    b.chi_lambda = monotonized(b.chi_lambda);
    b.chi_gamma = monotonized(b.chi_gamma);
    b.eta = monotonized(b.eta);
    const bool b_was_monotone = b.B.is_monotone();
    b.B = monotonized(b.B);
    b.notes.push_back(b_was_monotone ? "B is monotone as given"
                                     : "B monotonized at construction (the main theorem uses B monotone)");
    return b;
}

std::vector<std::string> preset_names() { return {"harmonic", "constant-gamma-harmonic-beta"}; }

ScheduleBundle preset(std::string_view name) {
    ScheduleBundle b;
    b.lambda = RealSequence::constant(mpq_class(1, 2));
    b.beta = RealSequence::ratio(1, 1, 1, 2);
    b.sigma = Counterfunction::ceil_exp(2);
    b.sigma_star = Counterfunction::parse("mul(affine:1,1,comp(affine:1,1,arg2))");
    b.chi_beta = Counterfunction::identity();
    b.chi_lambda = Counterfunction::constant(0);
    b.eta = Counterfunction::identity();
    b.B = Counterfunction::constant(2);
    b.Lambda = 2;
    b.N_Lambda = 0;
    b.Gamma = 1;
    b.N_Gamma = 0;
    if (name == "harmonic") {
        b.name = "harmonic";
        b.gamma = RealSequence::ratio(1, 2, 1, 1);
        b.chi_gamma = Counterfunction::identity();
        b.G = 2;
    } else if (name == "constant-gamma-harmonic-beta") {
        b.name = "constant-gamma-harmonic-beta";
        b.gamma = RealSequence::constant(1);
        b.chi_gamma = Counterfunction::constant(0);
        b.G = 1;
    } else {
        throw InvalidInput("unknown schedule preset '" + std::string(name) + "'");
    }
    return finalize(std::move(b));
}

Counterfunction chi_T_function(const ScheduleBundle& b, const BigNat& K) {
    if (K < 1) throw InvalidInput("K must be >= 1");
    const BigNat c = 2 * K * b.Gamma;
    return Counterfunction::max({Counterfunction::constant(b.N_Gamma),
                                 Counterfunction::compose(b.chi_gamma, Counterfunction::affine(c, c - 1))});
}

RateValue chi_T(const ScheduleBundle& b, const BigNat& K, const BigNat& k) {
    return chi_T_function(b, K)(RateValue(k));
}

// ---------------------------------------------------------------------------
// Audit

bool AuditReport::pass() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
}

const ConditionResult* AuditReport::find(std::string_view id) const {
    for (const auto& c : conditions)
        if (c.condition_id == id) return &c;
    return nullptr;
}

nlohmann::json to_json(const AuditReport& r) {
    nlohmann::json conds = nlohmann::json::array();
    for (const auto& c : r.conditions) {
        conds.push_back({{"condition_id", c.condition_id},
                         {"horizon", c.horizon},
                         {"pass", c.pass},
                         {"checked", c.checked},
                         {"first_violation", c.first_violation},
                         {"mode", c.mode}});
    }
    return {{"bundle", r.bundle}, {"horizon", r.horizon}, {"pass", r.pass()}, {"conditions", conds}, {"notes", r.notes}};
}

namespace {

class Violations {
public:
    Violations(std::string id, std::uint64_t horizon) { result_.condition_id = std::move(id); result_.horizon = horizon; }

    void check(bool ok, const std::function<nlohmann::json()>& witness) {
        ++result_.checked;
        if (!ok && result_.pass) {
            result_.pass = false;
            result_.first_violation = witness();
        }
    }
    ConditionResult& result() { return result_; }

private:
    ConditionResult result_;
};

// Cauchy-modulus claim for Σ|s_i - s_{i+1}|: every partial-sum difference
// d(a_{n+j}, a_n) = Σ_{i=n+1}^{n+j} b_i with n ≥ χ(k) and n + j < H stays ≤ 1/(k+1).
ConditionResult audit_cauchy(const std::string& id, const RealSequence& s, const Counterfunction& chi,
                             std::uint64_t H, double tol) {
    Violations v(id, H);
    std::vector<long double> tail(H + 2, 0.0L);  // tail[n] = Σ_{i=n}^{H-1} b_i
    for (std::uint64_t i = H; i-- > 0;) tail[i] = tail[i + 1] + std::abs(static_cast<long double>(s(i)) - s(i + 1));
    for (std::uint64_t k = 0; k <= H; ++k) {
        const RateValue c = chi(RateValue(k));
        if (c >= RateValue(H)) break;
        const std::uint64_t start = c.value().get_ui();
        const long double sum = tail[start + 1];
        v.check(sum <= 1.0L / (k + 1) + tol, [&] {
            return nlohmann::json{{"k", k}, {"modulus", big_json(c)}, {"window_sum", static_cast<double>(sum)}};
        });
    }
    return v.result();
}

}  // namespace

AuditReport audit_schedule(const ScheduleBundle& b, std::uint64_t H, double tol) {
    if (H < 1) throw InvalidInput("audit horizon must be >= 1");
    AuditReport report;
    report.bundle = b.name;
    report.horizon = H;
    report.notes = b.notes;

    std::vector<double> beta(H + 2), lambda(H + 2), gamma(H + 2);
    for (std::uint64_t n = 0; n <= H + 1; ++n) {
        beta[n] = b.beta(n);
        lambda[n] = b.lambda(n);
        gamma[n] = b.gamma(n);
    }

    {
        Violations v("range", H);
        for (std::uint64_t n = 0; n <= H; ++n) {
            const bool ok = beta[n] >= 0 && beta[n] <= 1 && lambda[n] >= 0 && lambda[n] <= 1 && gamma[n] > 0;
            v.check(ok, [&] { return nlohmann::json{{"n", n}, {"beta", beta[n]}, {"lambda", lambda[n]}, {"gamma", gamma[n]}}; });
        }
        report.conditions.push_back(v.result());
    }

    // (C1_q): Σ_{i ≤ σ(n)} (1 - β_i) ≥ n.
    {
        Violations v("C1q-sigma", H);
        std::vector<long double> prefix(H + 1);
        long double acc = 0;
        for (std::uint64_t i = 0; i <= H; ++i) prefix[i] = (acc += 1.0L - beta[i]);
        for (std::uint64_t n = 0;; ++n) {
            const RateValue s = b.sigma(RateValue(n));
            if (s > RateValue(H)) break;
            const long double sum = prefix[s.value().get_ui()];
            v.check(sum + tol >= static_cast<long double>(n), [&] {
                return nlohmann::json{{"n", n}, {"sigma_n", big_json(s)}, {"partial_sum", static_cast<double>(sum)}};
            });
            if (n > H) break;
        }
        report.conditions.push_back(v.result());
    }

    // (C1_q*): Π_{n=m}^{N} β_n ≤ 1/(k+1) for N = σ*(m, k); products are nonincreasing in N.
    {
        Violations v("C1q*-sigma_star", H);
        const bool exact = b.beta.has_exact() && H <= 10'000;
        v.result().mode = exact ? "exact" : "float";
        std::vector<std::uint32_t> zeros(H + 2, 0);
        std::vector<mpq_class> qprefix;
        std::vector<long double> lprefix(H + 2, 0.0L);
        if (exact) qprefix.assign(H + 2, mpq_class(1));
        for (std::uint64_t i = 0; i <= H; ++i) {
            const bool zero = beta[i] == 0.0;
            zeros[i + 1] = zeros[i] + (zero ? 1 : 0);
            lprefix[i + 1] = lprefix[i] + (zero ? 0.0L : std::log(static_cast<long double>(beta[i])));
            if (exact) {
                const mpq_class q = b.beta.exact(i);
                qprefix[i + 1] = q == 0 ? qprefix[i] : mpq_class(qprefix[i] * q);
            }
        }
        for (std::uint64_t m = 0; m <= H; ++m) {
            for (std::uint64_t k = 0;; ++k) {
                const RateValue N = b.sigma_star(RateValue(m), RateValue(k));
                if (N > RateValue(H)) break;
                const std::uint64_t last = N.value().get_ui();
                bool ok;
                double shown;
                if (last < m) {
                    ok = k == 0;  // empty product is 1
                    shown = 1.0;
                } else if (zeros[last + 1] > zeros[m]) {
                    ok = true;
                    shown = 0.0;
                } else if (exact) {
                    const mpq_class prod = qprefix[last + 1] / qprefix[m];
                    ok = prod <= mpq_class(1, k + 1);
                    shown = prod.get_d();
                } else {
                    const long double prod = std::exp(lprefix[last + 1] - lprefix[m]);
                    ok = prod <= 1.0L / (k + 1) + tol;
                    shown = static_cast<double>(prod);
                }
                v.check(ok, [&] { return nlohmann::json{{"m", m}, {"k", k}, {"N", last}, {"product", shown}}; });
                if (k > H) break;
            }
        }
        report.conditions.push_back(v.result());
    }

    report.conditions.push_back(audit_cauchy("C2q-chi_beta", b.beta, b.chi_beta, H, tol));
    report.conditions.push_back(audit_cauchy("C3q-chi_lambda", b.lambda, b.chi_lambda, H, tol));

    // (C4_q): 1 - β_n ≤ 1/(k+1) for n ≥ η(k).
    {
        Violations v("C4q-eta", H);
        std::vector<double> suffix_max(H + 2, -std::numeric_limits<double>::infinity());
        for (std::uint64_t n = H + 1; n-- > 0;) suffix_max[n] = std::max(suffix_max[n + 1], 1.0 - beta[n]);
        for (std::uint64_t k = 0; k <= H; ++k) {
            const RateValue e = b.eta(RateValue(k));
            if (e > RateValue(H)) break;
            const std::uint64_t start = e.value().get_ui();
            const double bound = 1.0 / static_cast<double>(k + 1);
            v.check(suffix_max[start] <= bound + tol, [&] {
                std::uint64_t n = start;
                while (n <= H && 1.0 - beta[n] <= bound + tol) ++n;
                return nlohmann::json{{"k", k}, {"n", n}, {"eta_k", big_json(e)}, {"one_minus_beta", 1.0 - beta[n]}};
            });
        }
        report.conditions.push_back(v.result());
    }

    // (C5_q): λ_n ≥ 1/Λ for n ≥ N_Λ.
    {
        Violations v("C5q-Lambda", H);
        const double bound = 1.0 / as_double(b.Lambda);
        for (std::uint64_t n = 0; n <= H; ++n) {
            if (n < b.N_Lambda) continue;
            v.check(lambda[n] + tol >= bound, [&] { return nlohmann::json{{"n", n}, {"lambda", lambda[n]}}; });
        }
        report.conditions.push_back(v.result());
    }

    report.conditions.push_back(audit_cauchy("C7q-chi_gamma", b.gamma, b.chi_gamma, H, tol));

    // (C8_q): γ_n ≥ 1/Γ for n ≥ N_Γ; and γ_n ≤ G.
    {
        Violations v("C8q-Gamma", H);
        Violations g("G-bound", H);
        const double bound = 1.0 / as_double(b.Gamma);
        const double upper = as_double(b.G);
        for (std::uint64_t n = 0; n <= H; ++n) {
            if (n >= b.N_Gamma)
                v.check(gamma[n] + tol >= bound, [&] { return nlohmann::json{{"n", n}, {"gamma", gamma[n]}}; });
            g.check(gamma[n] <= upper + tol, [&] { return nlohmann::json{{"n", n}, {"gamma", gamma[n]}}; });
        }
        report.conditions.push_back(v.result());
        report.conditions.push_back(g.result());
    }

    // (C9_q): β_n ≥ 1/B(n), B: ℕ → ℕ*.
    {
        Violations v("C9q-B", H);
        for (std::uint64_t n = 0; n <= H; ++n) {
            const RateValue Bn = b.B(RateValue(n));
            const bool positive = Bn > RateValue(0);
            const double inv = (positive && Bn.is_finite()) ? 1.0 / Bn.value().get_d() : 0.0;
            v.check(positive && beta[n] + tol >= inv,
                    [&] { return nlohmann::json{{"n", n}, {"B_n", big_json(Bn)}, {"beta", beta[n]}}; });
        }
        report.conditions.push_back(v.result());
    }

    return report;
}

}  // namespace tmlab
