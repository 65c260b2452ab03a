#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tmlab/engine.hpp"
#include "tmlab/rates.hpp"

namespace tmlab {

/// Outcome of one empirical check. `hypothesis_status` is "met", "unmet" (the
/// conclusion was not tested) or "vacuous" (nothing to test in range).
struct CheckResult {
    std::string check_id;
    bool pass = true;
    std::string hypothesis_status = "met";
    nlohmann::json witnesses = nlohmann::json::object();
    nlohmann::json horizons = nlohmann::json::object();
    nlohmann::json values = nlohmann::json::object();
    std::vector<std::string> notes;
};

nlohmann::json to_json(const CheckResult& r);

// ---------------------------------------------------------------------------
// Rate checks along trajectories

/// Least n such that values[i] ≤ bound for every i ≥ n in range; nullopt when
/// the last value is above the bound.
std::optional<std::uint64_t> first_hit(const std::vector<double>& values, double bound);

/// d(x_n, x_{n+1}) ≤ 1/(k+1) + tol on [min(rate, cap), end] and first-hit ≤ rate.
/// Throws InsufficientData when the trajectory ends before min(rate, cap).
CheckResult check_ar(const Trajectory& traj, const RateValue& rate, std::uint64_t k, std::uint64_t cap,
                     double tol);
/// Same with d(x_n, T_n x_n).
CheckResult check_family_ar(const Trajectory& traj, const MappingFamily& family, const RateValue& rate,
                            std::uint64_t k, std::uint64_t cap, double tol);
/// Same with d(x_n, T_m x_n).
CheckResult check_Tm_ar(const Trajectory& traj, const MappingFamily& family, std::uint64_t m,
                        const RateValue& rate, std::uint64_t k, std::uint64_t cap, double tol);

// ---------------------------------------------------------------------------
// Metastability

struct MetastabilityQuery {
    std::uint64_t k = 0;
    Counterfunction f = Counterfunction::constant(0);
    std::uint64_t cap = 1;
};

struct MetastableSearch {
    std::optional<std::uint64_t> n;
    /// Some window [n, f(n)] with n ≤ cap ran past the trajectory and was skipped.
    bool truncated = false;
    std::uint64_t windows_checked = 0;
};

/// Least n ≤ cap with d(x_i, x_j) ≤ 1/(k+1) + tol for all i, j ∈ {n, ..., f(n)};
/// windows with f(n) < n hold vacuously.
MetastableSearch search_metastable(const Trajectory& traj, const MetastabilityQuery& query, double tol);

/// search_metastable, then found n ≤ μ. Astronomical μ passes vacuously (flagged).
CheckResult check_mu(const Trajectory& traj, const MetastabilityQuery& query, const RateValue& mu_value,
                     double tol);

// ---------------------------------------------------------------------------
// Xu-type lemma

/// s_{n+1} = (1 - a_n)(s_n + v_n) + a_n r_n with s_n ≤ S.
struct SyntheticXuInstance {
    std::vector<double> s, a, v, r;
    BigNat S = 1;
    std::string generator;

    /// Builds s from s₀ and (a, v, r) on [0, length]; throws InvalidInput when
    /// a_n ∉ (0, 1), s leaves [0, S], or lengths disagree.
    static SyntheticXuInstance from_recurrence(double s0, std::vector<double> a, std::vector<double> v,
                                               std::vector<double> r, BigNat S, std::string generator);
    /// a_n = 1/(n+2), v = r = 0, s₀ = 1, so s_n = 1/(n+1).
    static SyntheticXuInstance telescoping(std::uint64_t length);
    /// a_n ∈ [1/(n+2), 1/(n+2) + (1 - 1/(n+2))/2), v_n ∈ [0, 1/(3(k+1)(q+1))],
    /// r_n ∈ [0, 1/(3(k+1))], s₀ ∈ [0, 1/2], S = 1.
    static SyntheticXuInstance random(Rng& rng, std::uint64_t k, std::uint64_t q);
};

enum class XuVariant { Divergence, Product };

/// Conclusion s_i ≤ 1/(k+1) + tol on [ζ(k, n), q] (variant Divergence, with σ)
/// or [ζ*(k, n), q] (variant Product, with σ*). Hypotheses on [n, q] are checked
/// first; if they fail the result is "unmet" and the conclusion is not tested.
CheckResult check_xu_lemma(const SyntheticXuInstance& inst, XuVariant variant, const Counterfunction& modulus,
                           std::uint64_t k, std::uint64_t n, std::uint64_t q, double tol);

// ---------------------------------------------------------------------------
// Proposition on recursive inequalities and the approximate-fixed-point lemmas

/// Parts (i)-(iii) at every index with x_{n+1} available, for reference point x.
CheckResult check_recursive_inequalities(const Trajectory& traj, const MappingFamily& family,
                                         const ScheduleBundle& bundle, const Point& x, double tol);

/// t ↦ {0, 1/(points-1), ..., 1}.
std::vector<double> t_grid(std::size_t points = 101);

/// If v₁, v₂ ∈ B_p(K) and d(v_i, T_n v_i) < 1/ω₁(k) for n ≤ n_max, then
/// d(w_t, T_n w_t) < 1/(k+1) for w_t = W(v₁, v₂, t) on the grid.
CheckResult check_convex_afp(const MappingFamily& family, const Point& v1, const Point& v2, const Point& p,
                             const BigNat& K, const BigNat& k, std::uint64_t n_max, const std::vector<double>& grid);

/// If x, y ∈ B_p(K) and d²(x, u) ≤ d²(w_t, u) + 1/ω₂(k) on the grid, then ⟨xu, xy⟩ ≤ 1/(k+1) + tol.
CheckResult check_variational(const SpaceModel& space, const Point& x, const Point& y, const Point& u,
                              const Point& p, const BigNat& K, const BigNat& k, const std::vector<double>& grid,
                              double tol);

/// Cauchy-modulus claim of χ_T for Σ d(T_{n+1}u_n, T_n u_n) along the trajectory,
/// for every k ≤ k_max.
CheckResult check_chi_T_series(const Trajectory& traj, const MappingFamily& family, const Counterfunction& chi_T,
                               std::uint64_t k_max, double tol);

// ---------------------------------------------------------------------------
// Shipped scenarios

struct Scenario {
    std::string name;
    SpaceModel space;
    MappingFamily family;
    ScheduleBundle bundle;
    Point u;
    Point x0;
    ScenarioBounds bounds;

    /// χ_T ≡ 0 for n-independent families, Prop. 3.4's χ_T otherwise.
    RateSystem rates(std::uint64_t bit_cap = kDefaultBitCap) const;
};

/// Builds a scenario; K defaults to ⌈max{d(x₀, p), d(u, p)}⌉ (at least 1).
Scenario make_scenario(std::string name, SpaceModel space, MappingFamily family, ScheduleBundle bundle, Point u,
                       Point x0, std::optional<BigNat> K = std::nullopt);

/// Euclidean(1) identity family, u = 0, x₀ = 1, harmonic schedule: x_n = 1/(n+1).
Scenario identity_scenario();

/// {euclidean(2), poincare-disk, tripod} × {identity, rotation, projection, proximal},
/// harmonic schedule, u ≠ x₀.
std::vector<Scenario> scenario_matrix();

}  // namespace tmlab
