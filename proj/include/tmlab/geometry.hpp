#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace tmlab {

/// Deterministic 64-bit generator used for every sampled check.
using Rng = std::mt19937_64;

enum class ModelKind { Euclidean, PoincareDisk, Tripod };

struct EuclideanPoint {
    std::vector<double> coords;
};

/// Point (a, b) of the open unit disk, a² + b² < 1.
struct DiskPoint {
    double a = 0.0;
    double b = 0.0;
};

/// Point on one of the three legs of a tripod (R-tree with a single branch point).
/// The leg is irrelevant when length == 0.
struct TripodPoint {
    int leg = 0;
    double length = 0.0;
};

using Point = std::variant<EuclideanPoint, DiskPoint, TripodPoint>;

/// Distance below which two points are considered equal, in every model.
inline constexpr double kPointEqualityTol = 1e-12;
/// Disk points must satisfy a² + b² < 1 - kDiskMargin.
inline constexpr double kDiskMargin = 1e-12;

/// Flat coordinate list: Euclidean coords, disk (a, b), tripod (leg, length).
std::vector<double> coordinates(const Point& p);
nlohmann::json to_json(const Point& p);
std::string to_string(const Point& p);

struct SampleSpec {
    std::uint64_t seed = 0;
    std::size_t count = 1;
    double radius = 1.0;

    void validate() const;
};

/// One axiom (or property) evaluated on sampled tuples.
struct AxiomReport {
    std::string axiom;
    std::size_t samples = 0;
    double max_violation = 0.0;  ///< positive means violated
    double tolerance = 0.0;
    nlohmann::json worst_case_inputs = nlohmann::json::object();
    bool pass = true;
};

nlohmann::json to_json(const AxiomReport& r);
bool all_pass(std::span<const AxiomReport> reports);

/// Concrete CAT(0) model: distance, geodesic convex combination W(x, y, λ) and
/// the Berg-Nikolaev quasilinearization. Immutable after construction.
class SpaceModel {
public:
    using Combination =
        std::function<Point(const SpaceModel&, const Point&, const Point&, double)>;

    static SpaceModel euclidean(std::size_t dim, double tol = 1e-12);
    static SpaceModel poincare_disk(double tol = 1e-12);
    static SpaceModel tripod(double tol = 1e-12);

    ModelKind kind() const noexcept { return kind_; }
    std::size_t dimension() const noexcept { return dim_; }
    double tolerance() const noexcept { return tol_; }
    /// "euclidean(2)", "poincare-disk", "tripod".
    std::string name() const;

    /// Throws InvalidInput when p does not belong to this model.
    void validate(const Point& p) const;
    Point make_point(std::span<const double> coords) const;
    /// Base point: Euclidean origin, disk center, tripod branch point.
    Point origin() const;

    double dist(const Point& x, const Point& y) const;
    /// (1 - λ)x + λy along the geodesic; λ outside [0, 1] throws InvalidInput.
    Point comb(const Point& x, const Point& y, double lambda) const;
    /// ⟨xy, uv⟩. Euclidean uses the dot product (y - x)·(v - u).
    double quasilin(const Point& x, const Point& y, const Point& u, const Point& v) const;
    /// ⟨xy, uv⟩ recomputed from four distances, for any model.
    double quasilin_from_distances(const Point& x, const Point& y, const Point& u,
                                   const Point& v) const;
    bool equal(const Point& x, const Point& y) const { return dist(x, y) <= kPointEqualityTol; }

    /// Random point within `radius` of `base`.
    Point sample(Rng& rng, const Point& base, double radius) const;

    /// Copy of this model whose combination is replaced. Test fixtures use it
    /// to build deliberately broken models.
    SpaceModel with_combination_override(Combination comb) const;
    bool has_override() const noexcept { return static_cast<bool>(override_); }

private:
    SpaceModel(ModelKind kind, std::size_t dim, double tol) : kind_(kind), dim_(dim), tol_(tol) {}

    Point geodesic_comb(const Point& x, const Point& y, double lambda) const;

    ModelKind kind_;
    std::size_t dim_ = 0;
    double tol_ = 1e-12;
    Combination override_;
};

/// (W1)-(W4) on `count` sampled tuples (x, y, z, w, λ, θ).
std::vector<AxiomReport> check_w_axioms(const SpaceModel& space, const SampleSpec& spec, double tol);
/// CN⁻ on midpoints and CN⁺ on random λ; Euclidean additionally reports the
/// CN⁻ equality deviation under axiom "CN-=".
std::vector<AxiomReport> check_cn(const SpaceModel& space, const SampleSpec& spec, double tol);
/// d(a, midpoint(x, y)) ≤ (1 - ε²/8) r with ε = min(2, d(x, y)/r).
AxiomReport check_uniform_convexity(const SpaceModel& space, const SampleSpec& spec, double tol);
/// Quasilinearization properties (1)-(4) and Cauchy-Schwarz.
std::vector<AxiomReport> check_quasilin_axioms(const SpaceModel& space, const SampleSpec& spec,
                                               double tol);

}  // namespace tmlab
