#include "tmlab/rates.hpp"

#include <cmath>

#include "tmlab/errors.hpp"

namespace tmlab {

namespace {

using CF = Counterfunction;

void require_positive(const BigNat& v, const char* what) {
    if (v < 1) throw InvalidInput(std::string(what) + " must be >= 1");
}

// n ↦ c(n+1) - 1 for c ≥ 1.
CF scaled_pred(const BigNat& c) { return CF::affine(c, c - 1); }

CF inc(const CF& f) { return CF::compose(CF::affine(1, 1), f); }

}  // namespace

ScenarioBounds ScenarioBounds::from_distance(double M, std::optional<BigNat> K) {
    if (!(M >= 0) || !std::isfinite(M)) throw InvalidInput("M must be a finite nonnegative distance");
    ScenarioBounds b;
    b.M = M;
    const BigNat ceilM(std::ceil(M - 1e-12));
    b.K = K.value_or(ceilM < 1 ? BigNat(1) : ceilM);
    b.validate();
    return b;
}

void ScenarioBounds::validate() const {
    require_positive(K, "K");
    require_positive(S, "S");
    if (BigNat(std::ceil(M - 1e-12)) > K)
        throw InvalidInput("K = " + K.get_str() + " is below M = " + std::to_string(M));
}

BigNat r_of_k(const BigNat& k, const BigNat& K) { return K * K * (k + 1); }
BigNat omega1(const BigNat& k, const BigNat& K) { return 24 * K * (k + 1) * (k + 1); }
BigNat omega2(const BigNat& k, const BigNat& K) { return 4 * K * K * (k + 1) * (k + 1); }

Counterfunction r_function(const BigNat& K) { return CF::affine(K * K, K * K); }

Counterfunction omega1_function(const BigNat& K) {
    return CF::compose(CF::affine(24 * K, 0), CF::compose(CF::power(2), CF::affine(1, 1)));
}

Counterfunction omega2_function(const BigNat& K) {
    return CF::compose(CF::affine(4 * K * K, 0), CF::compose(CF::power(2), CF::affine(1, 1)));
}

Counterfunction hat(const Counterfunction& f, const BigNat& K) {
    const CF w1 = omega1_function(K);
    return CF::max({w1, CF::compose(f, w1)});
}

RateValue bound_n_star(const BigNat& k, const Counterfunction& f, const BigNat& K, std::uint64_t bit_cap) {
    require_positive(K, "K");
    const BigNat steps = r_of_k(omega2(k, K), K);
    const RateValue inner = iterate(hat(f, K), steps, RateValue(0), bit_cap);
    return omega1_function(K)(inner, EvalOptions{bit_cap});
}

RateValue omega3(const BigNat& k, const Counterfunction& f, const Counterfunction& Phi, const BigNat& K,
                 std::uint64_t bit_cap) {
    require_positive(K, "K");
    const CF phi = monotonized(Phi);
    const BigNat steps = r_of_k(omega2(k, K), K);
    const RateValue inner = iterate(hat(CF::compose(f, phi), K), steps, RateValue(0), bit_cap);
    const EvalOptions opts{bit_cap};
    return phi(omega1_function(K)(inner, opts), opts);
}

Counterfunction zeta_function(const BigNat& k, const Counterfunction& sigma, const BigNat& S) {
    require_positive(S, "S");
    const BigNat shift = ceil_ln(3 * S * (k + 1));
    return inc(CF::compose(sigma, CF::affine(1, shift)));
}

Counterfunction zeta_star_function(const BigNat& k, const Counterfunction& sigma_star, const BigNat& S) {
    require_positive(S, "S");
    return inc(CF::apply2(sigma_star, CF::identity(), CF::constant(3 * S * (k + 1) - 1)));
}

RateValue zeta(const BigNat& k, const BigNat& n, const Counterfunction& sigma, const BigNat& S,
               std::uint64_t bit_cap) {
    return zeta_function(k, sigma, S)(RateValue(n), EvalOptions{bit_cap});
}

RateValue zeta_star(const BigNat& k, const BigNat& n, const Counterfunction& sigma_star, const BigNat& S,
                    std::uint64_t bit_cap) {
    return zeta_star_function(k, sigma_star, S)(RateValue(n), EvalOptions{bit_cap});
}

Counterfunction psi_function(const Counterfunction& phi, const BigNat& Gamma, const BigNat& G,
                             const BigNat& N_Gamma) {
    require_positive(Gamma, "Gamma");
    require_positive(G, "G");
    return CF::max({CF::compose(phi, scaled_pred(1 + 2 * Gamma * G)), CF::constant(N_Gamma)});
}

RateValue psi_from_phi(const Counterfunction& phi, const BigNat& k, const BigNat& Gamma, const BigNat& G,
                       const BigNat& N_Gamma, std::uint64_t bit_cap) {
    return psi_function(phi, Gamma, G, N_Gamma)(RateValue(k), EvalOptions{bit_cap});
}

// ---------------------------------------------------------------------------

RateSystem::RateSystem(ScheduleBundle bundle, BigNat K, Counterfunction chi_T, std::uint64_t bit_cap)
    : bundle_(std::move(bundle)),
      K_(std::move(K)),
      chi_T_(monotonized(chi_T)),
      cap_(bit_cap),
      chi_(CF::identity()),
      Sigma_(CF::identity()),
      Sigma_tilde_(CF::identity()),
      Sigma_star_(CF::identity()),
      Sigma_tilde_star_(CF::identity()),
      Psi_(CF::identity()),
      Psi_star_(CF::identity()) {
    require_positive(K_, "K");
    if (bit_cap < 64) throw InvalidInput("bit cap must be at least 64");
    const ScheduleBundle& b = bundle_;
    const BigNat eightK = 8 * K_;

    chi_ = CF::max({CF::compose(chi_T_, scaled_pred(2)), CF::compose(b.chi_lambda, scaled_pred(eightK)),
                    CF::compose(b.chi_beta, scaled_pred(eightK))});

    const CF chi_3k2 = CF::compose(chi_, CF::affine(3, 2));
    Sigma_ = inc(CF::compose(
        b.sigma, CF::sum({chi_3k2, CF::constant(2), CF::ceil_ln_of_linear(6 * K_, 6 * K_)})));
    Sigma_star_ = inc(CF::apply2(b.sigma_star, chi_3k2, scaled_pred(6 * K_)));

    auto tilde = [&](const CF& base) {
        return CF::max({CF::constant(b.N_Lambda), CF::compose(base, scaled_pred(2 * b.Lambda)),
                        CF::compose(b.eta, scaled_pred(4 * K_ * b.Lambda))});
    };
    Sigma_tilde_ = tilde(Sigma_);
    Sigma_tilde_star_ = tilde(Sigma_star_);
    Psi_ = psi_function(Sigma_tilde_, b.Gamma, b.G, b.N_Gamma);
    Psi_star_ = psi_function(Sigma_tilde_star_, b.Gamma, b.G, b.N_Gamma);
}

RateSystem RateSystem::for_family_with_c1(ScheduleBundle bundle, BigNat K, std::uint64_t bit_cap) {
    Counterfunction chiT = chi_T_function(bundle, K);
    return RateSystem(std::move(bundle), std::move(K), std::move(chiT), bit_cap);
}

RateSystem RateSystem::for_constant_family(ScheduleBundle bundle, BigNat K, std::uint64_t bit_cap) {
    return RateSystem(std::move(bundle), std::move(K), CF::constant(0), bit_cap);
}

RateValue RateSystem::metastability(const BigNat& k, const Counterfunction& f, const Counterfunction& Phi,
                                    bool star) const {
    const ScheduleBundle& b = bundle_;
    const EvalOptions opts{cap_};
    const BigNat kt = 4 * (k + 1) * (k + 1) - 1;
    const BigNat S = 4 * K_ * K_;
    const CF Z = star ? zeta_star_function(kt, b.sigma_star, S) : zeta_function(kt, b.sigma, S);

    const RateValue e = b.eta(RateValue(BigNat(24 * K_ * K_ * (kt + 1) - 1)), opts);
    if (e.is_astronomical()) return e.relabeled(star ? "mu_star" : "mu");
    const CF floor_e = CF::max({CF::identity(), CF::constant(e.value())});

    const CF fm = monotonized(f);
    const CF f_bar = CF::compose(fm, CF::compose(Z, floor_e));
    const CF f_tilde =
        CF::pred(CF::product({CF::constant(12 * K_ * (kt + 1)), inc(f_bar), CF::compose(b.B, f_bar)}));

    const RateValue w3 = omega3(12 * (kt + 1) - 1, f_tilde, Phi, K_, cap_);
    const RateValue arg = rate_arith::max(w3, RateValue(e));
    return Z(arg, opts);
}

RateValue RateSystem::mu(const BigNat& k, const Counterfunction& f, const std::optional<Counterfunction>& Phi) const {
    return metastability(k, f, Phi.value_or(Psi_), false);
}

RateValue RateSystem::mu_star(const BigNat& k, const Counterfunction& f,
                              const std::optional<Counterfunction>& Phi) const {
    return metastability(k, f, Phi.value_or(Psi_star_), true);
}

std::vector<std::string> RateSystem::names() {
    return {"chi", "Sigma", "Sigma_tilde", "Sigma_star", "Sigma_tilde_star", "Psi", "Psi_star", "mu", "mu_star"};
}

RateValue RateSystem::value(std::string_view name, const BigNat& k, const Counterfunction& f,
                            const std::optional<Counterfunction>& Phi) const {
    if (name == "chi") return chi(k);
    if (name == "Sigma") return Sigma(k);
    if (name == "Sigma_tilde") return Sigma_tilde(k);
    if (name == "Sigma_star") return Sigma_star(k);
    if (name == "Sigma_tilde_star") return Sigma_tilde_star(k);
    if (name == "Psi") return Psi(k);
    if (name == "Psi_star") return Psi_star(k);
    if (name == "mu") return mu(k, f, Phi);
    if (name == "mu_star") return mu_star(k, f, Phi);
    throw InvalidInput("unknown rate '" + std::string(name) + "'");
}

}  // namespace tmlab
