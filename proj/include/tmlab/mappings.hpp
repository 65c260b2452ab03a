#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "tmlab/geometry.hpp"
#include "tmlab/schedules.hpp"

namespace tmlab {

/// Convex function whose proximal mappings form a family.
struct ConvexFunction {
    enum class Kind { HalfSquaredNorm, IndicatorOfBall };

    Kind kind = Kind::HalfSquaredNorm;
    Point center;
    double radius = 0.0;  ///< IndicatorOfBall only; > 0

    static ConvexFunction half_squared_norm(Point center);
    static ConvexFunction indicator_of_ball(Point center, double radius);
};

/// Indexed family (T_n) of nonexpansive self-maps of one space model together
/// with a common fixed point p.
///
///   Identity            T_n x = x
///   Constant            T_n = base T_0 for every n
///   Rotation            Euclidean: rotation by θ in the first coordinate plane;
///                       disk: rotation about the center; tripod: leg shift by
///                       round(3θ/2π) positions
///   MetricProjection    projection onto the closed ball B_c(ρ)
///   Proximal            prox_{γ_n f}; for f = ½d²(·, c) this is W(x, c, γ_n/(1+γ_n))
///   Resolvent           J_{γ_n}x, the fixed point of z ↦ W(x, T z, γ_n/(1+γ_n))
class MappingFamily {
public:
    enum class Variant { Identity, Constant, Rotation, MetricProjection, Proximal, Resolvent };

    static MappingFamily identity(const SpaceModel& space);
    static MappingFamily constant(const MappingFamily& base);
    static MappingFamily rotation(const SpaceModel& space, double theta);
    static MappingFamily metric_projection(const SpaceModel& space, Point center, double radius);
    static MappingFamily proximal(const SpaceModel& space, ConvexFunction f, RealSequence gamma);
    static MappingFamily resolvent(const MappingFamily& base, RealSequence gamma, double inner_tol = 1e-12,
                                   std::uint64_t inner_max_iter = 10'000);

    Variant variant() const;
    std::string name() const;
    const SpaceModel& space() const;
    const Point& fixed_point() const;
    /// The γ sequence of proximal and resolvent families.
    const std::optional<RealSequence>& gamma() const;
    /// False when T_n does not depend on n.
    bool depends_on_n() const;

    /// T_n(x). Resolvent families throw SolverFailure when the inner solve stalls.
    Point apply(std::uint64_t n, const Point& x) const;

    /// Copy with a different fixed-point witness (validated against the family).
    MappingFamily with_fixed_point(Point p, double tol = 1e-9) const;

    struct Impl;

private:
    explicit MappingFamily(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// d(T_n x, T_n y) ≤ d(x, y) + tol for sampled pairs around p and every n ≤ n_max.
AxiomReport check_nonexpansive(const MappingFamily& family, std::uint64_t n_max, const SampleSpec& spec,
                               double tol);

/// d(T_n p, p) ≤ tol for every n ≤ n_max.
AxiomReport check_fixed_point(const MappingFamily& family, std::uint64_t n_max, double tol);

/// d(T_n x, T_m x) ≤ (|γ_m - γ_n| / γ_n) d(T_n x, x) + tol for all n, m ≤ n_max.
AxiomReport check_condition_c1(const MappingFamily& family, const RealSequence& gammas, std::uint64_t n_max,
                               const SampleSpec& spec, double tol);

/// x ∈ B_p(K) and d(x, T_n x) ≤ 1/k for all n ≤ n_max. Throws InvalidInput for k = 0.
bool check_afp_membership(const MappingFamily& family, const Point& x, const Point& p, const BigNat& K,
                          const BigNat& k, std::uint64_t n_max);

}  // namespace tmlab
