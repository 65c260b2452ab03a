#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "tmlab/counterfunction.hpp"

namespace tmlab {

/// Real-valued parameter sequence n ↦ s_n.
///
/// Grammar: `const:c` (c a decimal or p/q) and `ratio:a,b,c,d` for
/// (a·n + b)/(c·n + d) with integer coefficients. Both forms carry an exact
/// rational evaluator, used by the audit for β products.
class RealSequence {
public:
    static RealSequence parse(std::string_view text);
    static RealSequence constant(const mpq_class& c);
    static RealSequence ratio(long a, long b, long c, long d);
    /// Arbitrary float-only sequence (no exact form).
    static RealSequence custom(std::string text, std::function<double(std::uint64_t)> fn);

    double operator()(std::uint64_t n) const { return fn_(n); }
    bool has_exact() const { return static_cast<bool>(exact_); }
    mpq_class exact(std::uint64_t n) const;
    const std::string& text() const { return text_; }

private:
    std::string text_;
    std::function<double(std::uint64_t)> fn_;
    std::function<mpq_class(std::uint64_t)> exact_;
};

/// (λ_n), (β_n), (γ_n) with the quantitative moduli of the iteration's
/// parameter conditions:
///   sigma       rate of divergence of Σ(1 - β_n)
///   sigma_star  (m, k) ↦ rate for Π_{n≥m} β_n → 0, bivariate (`arg2` is k)
///   chi_beta, chi_lambda, chi_gamma   Cauchy moduli of Σ|s_n - s_{n+1}|
///   eta         rate of β_n → 1
///   Lambda, N_Lambda   λ_n ≥ 1/Λ for n ≥ N_Λ
///   Gamma, N_Gamma     γ_n ≥ 1/Γ for n ≥ N_Γ
///   G           upper bound on γ_n
///   B           β_n ≥ 1/B(n)
struct ScheduleBundle {
    std::string name;
    RealSequence lambda;
    RealSequence beta;
    RealSequence gamma;
    Counterfunction sigma = Counterfunction::identity();
    Counterfunction sigma_star = Counterfunction::identity();
    Counterfunction chi_beta = Counterfunction::identity();
    Counterfunction chi_lambda = Counterfunction::identity();
    Counterfunction chi_gamma = Counterfunction::identity();
    Counterfunction eta = Counterfunction::identity();
    Counterfunction B = Counterfunction::constant(1);
    BigNat Lambda = 1;
    BigNat N_Lambda = 0;
    BigNat Gamma = 1;
    BigNat N_Gamma = 0;
    BigNat G = 1;
    /// Construction notes carried into audit reports.
    std::vector<std::string> notes;
};

/// Monotonizes every unary modulus (recording B's monotonization) and checks
/// Λ, Γ ≥ 1. Throws InvalidInput on a malformed bundle.
ScheduleBundle finalize(ScheduleBundle bundle);

/// Names accepted by preset().
std::vector<std::string> preset_names();

/// "harmonic": β_n = (n+1)/(n+2), λ_n = 1/2, γ_n = 1 + 1/(n+1) with
/// σ(n) = ⌈2eⁿ⌉, σ*(m,k) = (m+1)(k+1), χ_β = χ_γ = η = id, χ_λ = 0, B = 2,
/// Λ = 2, N_Λ = 0, Γ = 1, N_Γ = 0, G = 2.
/// "constant-gamma-harmonic-beta": the same β and λ with γ_n = 1, χ_γ = 0, G = 1.
ScheduleBundle preset(std::string_view name);

/// χ_T(k) = max{N_Γ, χ_γ(2KΓ(k+1) - 1)}, a Cauchy modulus for
/// Σ d(T_{n+1}u_n, T_n u_n) when the family satisfies Condition (C1).
Counterfunction chi_T_function(const ScheduleBundle& bundle, const BigNat& K);
RateValue chi_T(const ScheduleBundle& bundle, const BigNat& K, const BigNat& k);

struct ConditionResult {
    std::string condition_id;
    std::uint64_t horizon = 0;
    bool pass = true;
    std::size_t checked = 0;
    nlohmann::json first_violation;  ///< null when none
    std::string mode;                ///< "exact" or "float" where relevant
};

struct AuditReport {
    std::string bundle;
    std::uint64_t horizon = 0;
    std::vector<ConditionResult> conditions;
    std::vector<std::string> notes;

    bool pass() const;
    const ConditionResult* find(std::string_view id) const;
};

nlohmann::json to_json(const AuditReport& report);

/// Checks every modulus claim of the bundle on [0, horizon].
AuditReport audit_schedule(const ScheduleBundle& bundle, std::uint64_t horizon, double tol = 1e-9);

}  // namespace tmlab
