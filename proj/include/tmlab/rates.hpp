#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tmlab/counterfunction.hpp"
#include "tmlab/schedules.hpp"

namespace tmlab {

/// K ≥ M = max{d(x₀, p), d(u, p)} and the Xu-lemma bound S.
struct ScenarioBounds {
    BigNat K = 1;
    double M = 0.0;
    BigNat S = 1;

    /// K defaults to max{1, ⌈M⌉}; an explicit K below ⌈M⌉ throws InvalidInput.
    static ScenarioBounds from_distance(double M, std::optional<BigNat> K = std::nullopt);
    void validate() const;
};

// Building blocks of the approximate-fixed-point lemmas.

BigNat r_of_k(const BigNat& k, const BigNat& K);   ///< K²(k+1)
BigNat omega1(const BigNat& k, const BigNat& K);   ///< 24K(k+1)²
BigNat omega2(const BigNat& k, const BigNat& K);   ///< 4K²(k+1)²
Counterfunction r_function(const BigNat& K);
Counterfunction omega1_function(const BigNat& K);
Counterfunction omega2_function(const BigNat& K);

/// f̂(k) = max{ω₁(k), f(ω₁(k))}.
Counterfunction hat(const Counterfunction& f, const BigNat& K);

/// ω₁(f̂^{(r(ω₂(k)))}(0)).
RateValue bound_n_star(const BigNat& k, const Counterfunction& f, const BigNat& K,
                       std::uint64_t bit_cap = kDefaultBitCap);

/// ω₃(k, f) = Φ(ω₁(g^{(r(ω₂(k)))}(0))) with g the hat of f∘Φ; Φ is monotonized first.
RateValue omega3(const BigNat& k, const Counterfunction& f, const Counterfunction& Phi, const BigNat& K,
                 std::uint64_t bit_cap = kDefaultBitCap);

/// ζ(k, n) = σ(n + ⌈ln(3S(k+1))⌉) + 1.
RateValue zeta(const BigNat& k, const BigNat& n, const Counterfunction& sigma, const BigNat& S,
               std::uint64_t bit_cap = kDefaultBitCap);
/// ζ*(k, n) = σ*(n, 3S(k+1) - 1) + 1.
RateValue zeta_star(const BigNat& k, const BigNat& n, const Counterfunction& sigma_star, const BigNat& S,
                    std::uint64_t bit_cap = kDefaultBitCap);
/// n ↦ ζ(k, n) and n ↦ ζ*(k, n).
Counterfunction zeta_function(const BigNat& k, const Counterfunction& sigma, const BigNat& S);
Counterfunction zeta_star_function(const BigNat& k, const Counterfunction& sigma_star, const BigNat& S);

/// k ↦ max{φ((1 + 2ΓG)(k+1) - 1), N_Γ}.
Counterfunction psi_function(const Counterfunction& phi, const BigNat& Gamma, const BigNat& G,
                             const BigNat& N_Gamma);
RateValue psi_from_phi(const Counterfunction& phi, const BigNat& k, const BigNat& Gamma, const BigNat& G,
                       const BigNat& N_Gamma, std::uint64_t bit_cap = kDefaultBitCap);

/// Every rate of the asymptotic-regularity and metastability theorems for one
/// bundle, K and χ_T. Each rate is available as a Counterfunction (so it can be
/// fed back as Φ) and as a value.
class RateSystem {
public:
    RateSystem(ScheduleBundle bundle, BigNat K, Counterfunction chi_T, std::uint64_t bit_cap = kDefaultBitCap);
    /// χ_T from the bundle's γ moduli.
    static RateSystem for_family_with_c1(ScheduleBundle bundle, BigNat K, std::uint64_t bit_cap = kDefaultBitCap);
    /// χ_T ≡ 0, valid for families with T_n = T.
    static RateSystem for_constant_family(ScheduleBundle bundle, BigNat K, std::uint64_t bit_cap = kDefaultBitCap);

    const ScheduleBundle& bundle() const { return bundle_; }
    const BigNat& K() const { return K_; }
    std::uint64_t bit_cap() const { return cap_; }
    const Counterfunction& chi_T() const { return chi_T_; }

    const Counterfunction& chi_function() const { return chi_; }
    const Counterfunction& Sigma_function() const { return Sigma_; }
    const Counterfunction& Sigma_tilde_function() const { return Sigma_tilde_; }
    const Counterfunction& Sigma_star_function() const { return Sigma_star_; }
    const Counterfunction& Sigma_tilde_star_function() const { return Sigma_tilde_star_; }
    const Counterfunction& Psi_function() const { return Psi_; }
    const Counterfunction& Psi_star_function() const { return Psi_star_; }

    RateValue chi(const BigNat& k) const { return at(chi_, k); }
    RateValue Sigma(const BigNat& k) const { return at(Sigma_, k); }
    RateValue Sigma_tilde(const BigNat& k) const { return at(Sigma_tilde_, k); }
    RateValue Sigma_star(const BigNat& k) const { return at(Sigma_star_, k); }
    RateValue Sigma_tilde_star(const BigNat& k) const { return at(Sigma_tilde_star_, k); }
    RateValue Psi(const BigNat& k) const { return at(Psi_, k); }
    RateValue Psi_star(const BigNat& k) const { return at(Psi_star_, k); }

    /// μ(k, f); Φ defaults to Ψ.
    RateValue mu(const BigNat& k, const Counterfunction& f,
                 const std::optional<Counterfunction>& Phi = std::nullopt) const;
    /// μ*(k, f); Φ defaults to Ψ*.
    RateValue mu_star(const BigNat& k, const Counterfunction& f,
                      const std::optional<Counterfunction>& Phi = std::nullopt) const;

    /// Column names accepted by value(): chi, Sigma, Sigma_tilde, Sigma_star,
    /// Sigma_tilde_star, Psi, Psi_star, mu, mu_star.
    static std::vector<std::string> names();
    RateValue value(std::string_view name, const BigNat& k, const Counterfunction& f,
                    const std::optional<Counterfunction>& Phi = std::nullopt) const;

private:
    RateValue at(const Counterfunction& g, const BigNat& k) const { return g(RateValue(k), EvalOptions{cap_}); }
    RateValue metastability(const BigNat& k, const Counterfunction& f, const Counterfunction& Phi, bool star) const;

    ScheduleBundle bundle_;
    BigNat K_;
    Counterfunction chi_T_;
    std::uint64_t cap_;
    Counterfunction chi_, Sigma_, Sigma_tilde_, Sigma_star_, Sigma_tilde_star_, Psi_, Psi_star_;
};

}  // namespace tmlab
