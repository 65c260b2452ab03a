#include "tmlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "tmlab/errors.hpp"
#include "tracker.hpp"

namespace tmlab {

namespace {

using Complex = std::complex<double>;
using detail::Tracker;

Complex as_complex(const DiskPoint& p) { return {p.a, p.b}; }
DiskPoint as_disk(Complex z) { return {z.real(), z.imag()}; }

// Möbius isometry of the disk sending a to 0.
Complex mobius_to_origin(Complex a, Complex z) { return (z - a) / (1.0 - std::conj(a) * z); }
// Inverse of mobius_to_origin(a, .).
Complex mobius_from_origin(Complex a, Complex w) { return (w + a) / (1.0 + std::conj(a) * w); }

double sq(double v) { return v * v; }

double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

template <class T>
const T& expect(const Point& p, const char* model) {
    if (const auto* v = std::get_if<T>(&p)) return *v;
    throw InvalidInput(std::string("point does not belong to the ") + model + " model");
}

}  // namespace

std::vector<double> coordinates(const Point& p) {
    return std::visit(
        [](const auto& v) -> std::vector<double> {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, EuclideanPoint>) {
                return v.coords;
            } else if constexpr (std::is_same_v<T, DiskPoint>) {
                return {v.a, v.b};
            } else {
                return {static_cast<double>(v.leg), v.length};
            }
        },
        p);
}

nlohmann::json to_json(const Point& p) { return coordinates(p); }

std::string to_string(const Point& p) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    const auto c = coordinates(p);
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? ", " : "") << c[i];
    os << ')';
    return os.str();
}

void SampleSpec::validate() const {
    if (count < 1) throw InvalidInput("sample count must be >= 1");
    if (!(radius > 0.0)) throw InvalidInput("sample radius must be > 0");
}

nlohmann::json to_json(const AxiomReport& r) {
    return {{"axiom", r.axiom},
            {"samples", r.samples},
            {"max_violation", r.max_violation},
            {"tolerance", r.tolerance},
            {"worst_case_inputs", r.worst_case_inputs},
            {"pass", r.pass}};
}

bool all_pass(std::span<const AxiomReport> reports) {
    return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

SpaceModel SpaceModel::euclidean(std::size_t dim, double tol) {
    if (dim == 0) throw InvalidInput("Euclidean dimension must be >= 1");
    return SpaceModel(ModelKind::Euclidean, dim, tol);
}

SpaceModel SpaceModel::poincare_disk(double tol) { return SpaceModel(ModelKind::PoincareDisk, 2, tol); }

SpaceModel SpaceModel::tripod(double tol) { return SpaceModel(ModelKind::Tripod, 1, tol); }

std::string SpaceModel::name() const {
    switch (kind_) {
        case ModelKind::Euclidean: return "euclidean(" + std::to_string(dim_) + ")";
        case ModelKind::PoincareDisk: return "poincare-disk";
        case ModelKind::Tripod: return "tripod";
    }
    return "unknown";
}

void SpaceModel::validate(const Point& p) const {
    switch (kind_) {
        case ModelKind::Euclidean: {
            const auto& e = expect<EuclideanPoint>(p, "Euclidean");
            if (e.coords.size() != dim_)
                throw InvalidInput("Euclidean point has " + std::to_string(e.coords.size()) +
                                   " coordinates, model has dimension " + std::to_string(dim_));
            for (double c : e.coords)
                if (!std::isfinite(c)) throw InvalidInput("non-finite Euclidean coordinate");
            return;
        }
        case ModelKind::PoincareDisk: {
            const auto& d = expect<DiskPoint>(p, "Poincare disk");
            if (!std::isfinite(d.a) || !std::isfinite(d.b) || sq(d.a) + sq(d.b) >= 1.0 - kDiskMargin)
                throw InvalidInput("disk point " + to_string(p) + " is not inside the unit disk");
            return;
        }
        case ModelKind::Tripod: {
            const auto& t = expect<TripodPoint>(p, "tripod");
            if (t.leg < 0 || t.leg > 2) throw InvalidInput("tripod leg must be 0, 1 or 2");
            if (!std::isfinite(t.length) || t.length < 0.0)
                throw InvalidInput("tripod arm length must be finite and nonnegative");
            return;
        }
    }
}

Point SpaceModel::make_point(std::span<const double> coords) const {
    Point p;
    switch (kind_) {
        case ModelKind::Euclidean:
            p = EuclideanPoint{std::vector<double>(coords.begin(), coords.end())};
            break;
        case ModelKind::PoincareDisk:
            if (coords.size() != 2) throw InvalidInput("disk point needs 2 coordinates");
            p = DiskPoint{coords[0], coords[1]};
            break;
        case ModelKind::Tripod: {
            if (coords.size() != 2) throw InvalidInput("tripod point needs (leg, length)");
            const double leg = coords[0];
            if (leg != std::floor(leg)) throw InvalidInput("tripod leg must be an integer");
            p = TripodPoint{static_cast<int>(leg), coords[1]};
            break;
        }
    }
    validate(p);
    return p;
}

Point SpaceModel::origin() const {
    switch (kind_) {
        case ModelKind::Euclidean: return EuclideanPoint{std::vector<double>(dim_, 0.0)};
        case ModelKind::PoincareDisk: return DiskPoint{};
        case ModelKind::Tripod: return TripodPoint{};
    }
    return DiskPoint{};
}

double SpaceModel::dist(const Point& x, const Point& y) const {
    validate(x);
    validate(y);
    switch (kind_) {
        case ModelKind::Euclidean: {
            const auto& a = std::get<EuclideanPoint>(x).coords;
            const auto& b = std::get<EuclideanPoint>(y).coords;
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) s += sq(a[i] - b[i]);
            return std::sqrt(s);
        }
        case ModelKind::PoincareDisk: {
            const Complex z = as_complex(std::get<DiskPoint>(x));
            const Complex w = as_complex(std::get<DiskPoint>(y));
            const double ratio = std::abs(z - w) / std::abs(1.0 - std::conj(z) * w);
            return 2.0 * std::atanh(std::min(ratio, 1.0 - 1e-16));
        }
        case ModelKind::Tripod: {
            const auto& s = std::get<TripodPoint>(x);
            const auto& t = std::get<TripodPoint>(y);
            if (s.leg == t.leg) return std::abs(s.length - t.length);
            return s.length + t.length;
        }
    }
    return 0.0;
}

Point SpaceModel::comb(const Point& x, const Point& y, double lambda) const {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw InvalidInput("convex combination parameter must lie in [0, 1]");
    validate(x);
    validate(y);
    if (override_) return override_(*this, x, y, lambda);
    return geodesic_comb(x, y, lambda);
}

Point SpaceModel::geodesic_comb(const Point& x, const Point& y, double lambda) const {
    switch (kind_) {
        case ModelKind::Euclidean: {
            const auto& a = std::get<EuclideanPoint>(x).coords;
            const auto& b = std::get<EuclideanPoint>(y).coords;
            EuclideanPoint out{std::vector<double>(a.size())};
            for (std::size_t i = 0; i < a.size(); ++i) out.coords[i] = (1.0 - lambda) * a[i] + lambda * b[i];
            return out;
        }
        case ModelKind::PoincareDisk: {
            if (lambda == 0.0) return x;
            if (lambda == 1.0) return y;
            const Complex base = as_complex(std::get<DiskPoint>(x));
            const Complex z = mobius_to_origin(base, as_complex(std::get<DiskPoint>(y)));
            const double r = std::abs(z);
            if (r == 0.0) return x;
            // Along the diameter through z, hyperbolic distance λ·d sits at Euclidean radius tanh(λ·d/2).
            const double d = 2.0 * std::atanh(r);
            const Complex w = std::tanh(lambda * d / 2.0) * (z / r);
            return as_disk(mobius_from_origin(base, w));
        }
        case ModelKind::Tripod: {
            const auto& s = std::get<TripodPoint>(x);
            const auto& t = std::get<TripodPoint>(y);
            if (s.leg == t.leg) return TripodPoint{s.leg, (1.0 - lambda) * s.length + lambda * t.length};
            const double travel = lambda * (s.length + t.length);
            if (travel <= s.length) return TripodPoint{s.leg, s.length - travel};
            return TripodPoint{t.leg, std::min(travel - s.length, t.length)};
        }
    }
    return x;
}

double SpaceModel::quasilin(const Point& x, const Point& y, const Point& u, const Point& v) const {
    if (kind_ == ModelKind::Euclidean && !override_) {
        validate(x), validate(y), validate(u), validate(v);
        const auto& a = std::get<EuclideanPoint>(x).coords;
        const auto& b = std::get<EuclideanPoint>(y).coords;
        const auto& c = std::get<EuclideanPoint>(u).coords;
        const auto& d = std::get<EuclideanPoint>(v).coords;
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += (b[i] - a[i]) * (d[i] - c[i]);
        return s;
    }
    return quasilin_from_distances(x, y, u, v);
}

double SpaceModel::quasilin_from_distances(const Point& x, const Point& y, const Point& u,
                                           const Point& v) const {
    return 0.5 * (sq(dist(x, v)) + sq(dist(y, u)) - sq(dist(x, u)) - sq(dist(y, v)));
}

Point SpaceModel::sample(Rng& rng, const Point& base, double radius) const {
    validate(base);
    switch (kind_) {
        case ModelKind::Euclidean: {
            std::normal_distribution<double> gauss;
            std::vector<double> dir(dim_);
            double norm = 0.0;
            while (norm == 0.0) {
                norm = 0.0;
                for (auto& c : dir) {
                    c = gauss(rng);
                    norm += c * c;
                }
                norm = std::sqrt(norm);
            }
            const double rho = radius * std::pow(uniform(rng, 0.0, 1.0), 1.0 / static_cast<double>(dim_));
            auto out = std::get<EuclideanPoint>(base);
            for (std::size_t i = 0; i < dim_; ++i) out.coords[i] += rho * dir[i] / norm;
            return out;
        }
        case ModelKind::PoincareDisk: {
            const double rho = radius * std::sqrt(uniform(rng, 0.0, 1.0));
            const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
            const Complex w = std::polar(std::tanh(rho / 2.0), angle);
            Complex z = mobius_from_origin(as_complex(std::get<DiskPoint>(base)), w);
            const double limit = std::sqrt(1.0 - 1e-9);
            if (std::abs(z) > limit) z *= limit / std::abs(z);
            return as_disk(z);
        }
        case ModelKind::Tripod: {
            const auto& b = std::get<TripodPoint>(base);
            // Occasionally land exactly on the branch point to exercise the degenerate leg.
            if (uniform(rng, 0.0, 1.0) < 0.05 && b.length <= radius) return TripodPoint{};
            const double rho = radius * uniform(rng, 0.0, 1.0);
            const int ray = std::uniform_int_distribution<int>(0, 2)(rng);
            if (ray == 0) return TripodPoint{b.leg, b.length + rho};
            if (rho <= b.length) return TripodPoint{b.leg, b.length - rho};
            // Past the branch point onto one of the other two legs (or back out along a
            // leg when the base itself is the branch point).
            int leg = (b.leg + ray) % 3;
            if (b.length == 0.0) leg = std::uniform_int_distribution<int>(0, 2)(rng);
            return TripodPoint{leg, rho - b.length};
        }
    }
    return base;
}

SpaceModel SpaceModel::with_combination_override(Combination comb) const {
    SpaceModel copy = *this;
    copy.override_ = std::move(comb);
    return copy;
}

// ---------------------------------------------------------------------------
// Axiom checkers

std::vector<AxiomReport> check_w_axioms(const SpaceModel& space, const SampleSpec& spec, double tol) {
    spec.validate();
    Rng rng(spec.seed);
    const Point base = space.origin();
    Tracker w1("W1", tol), w2("W2", tol), w3("W3", tol), w4("W4", tol);
    for (std::size_t i = 0; i < spec.count; ++i) {
        const Point x = space.sample(rng, base, spec.radius);
        const Point y = space.sample(rng, base, spec.radius);
        const Point z = space.sample(rng, base, spec.radius);
        const Point w = space.sample(rng, base, spec.radius);
        const double lambda = uniform(rng, 0.0, 1.0);
        const double theta = uniform(rng, 0.0, 1.0);
        auto inputs = [&] {
            return nlohmann::json{{"x", to_json(x)}, {"y", to_json(y)}, {"z", to_json(z)},
                                  {"w", to_json(w)}, {"lambda", lambda}, {"theta", theta}};
        };
        const Point xy_l = space.comb(x, y, lambda);
        const double dxy = space.dist(x, y);

        w1.record(space.dist(z, xy_l) - ((1 - lambda) * space.dist(z, x) + lambda * space.dist(z, y)), inputs);
        w2.record(std::abs(space.dist(xy_l, space.comb(x, y, theta)) - std::abs(lambda - theta) * dxy), inputs);
        w3.record(space.dist(xy_l, space.comb(y, x, 1.0 - lambda)), inputs);
        w4.record(space.dist(space.comb(x, z, lambda), space.comb(y, w, lambda)) -
                      ((1 - lambda) * space.dist(x, y) + lambda * space.dist(z, w)),
                  inputs);
    }
    return {w1.finish(), w2.finish(), w3.finish(), w4.finish()};
}

std::vector<AxiomReport> check_cn(const SpaceModel& space, const SampleSpec& spec, double tol) {
    spec.validate();
    Rng rng(spec.seed);
    const Point base = space.origin();
    Tracker minus("CN-", tol), plus("CN+", tol), equality("CN-=", tol);
    const bool hilbert = space.kind() == ModelKind::Euclidean;
    for (std::size_t i = 0; i < spec.count; ++i) {
        const Point x = space.sample(rng, base, spec.radius);
        const Point y = space.sample(rng, base, spec.radius);
        const Point z = space.sample(rng, base, spec.radius);
        const double lambda = uniform(rng, 0.0, 1.0);
        auto inputs = [&] {
            return nlohmann::json{{"x", to_json(x)}, {"y", to_json(y)}, {"z", to_json(z)}, {"lambda", lambda}};
        };
        const double dzx2 = sq(space.dist(z, x));
        const double dzy2 = sq(space.dist(z, y));
        const double dxy2 = sq(space.dist(x, y));

        const double mid_gap = sq(space.dist(z, space.comb(x, y, 0.5))) - (0.5 * dzx2 + 0.5 * dzy2 - 0.25 * dxy2);
        minus.record(mid_gap, inputs);
        if (hilbert) equality.record(std::abs(mid_gap), inputs);
        plus.record(sq(space.dist(z, space.comb(x, y, lambda))) -
                        ((1 - lambda) * dzx2 + lambda * dzy2 - lambda * (1 - lambda) * dxy2),
                    inputs);
    }
    std::vector<AxiomReport> out{minus.finish(), plus.finish()};
    if (hilbert) out.push_back(equality.finish());
    return out;
}

AxiomReport check_uniform_convexity(const SpaceModel& space, const SampleSpec& spec, double tol) {
    spec.validate();
    Rng rng(spec.seed);
    const Point base = space.origin();
    Tracker uc("uniform-convexity", tol);
    for (std::size_t i = 0; i < spec.count; ++i) {
        const Point a = space.sample(rng, base, spec.radius);
        const Point x = space.sample(rng, base, spec.radius);
        const Point y = space.sample(rng, base, spec.radius);
        const double r = std::max(space.dist(a, x), space.dist(a, y));
        if (r == 0.0) continue;
        const double eps = std::min(2.0, space.dist(x, y) / r);
        const double lhs = space.dist(a, space.comb(x, y, 0.5));
        uc.record(lhs - (1.0 - eps * eps / 8.0) * r, [&] {
            return nlohmann::json{{"a", to_json(a)}, {"x", to_json(x)}, {"y", to_json(y)}, {"r", r}, {"epsilon", eps}};
        });
    }
    return uc.finish();
}

std::vector<AxiomReport> check_quasilin_axioms(const SpaceModel& space, const SampleSpec& spec,
                                               double tol) {
    spec.validate();
    Rng rng(spec.seed);
    const Point base = space.origin();
    Tracker p1("QL1-self", tol), p2("QL2-symmetry", tol), p3("QL3-antisymmetry", tol),
        p4("QL4-additivity", tol), cs("cauchy-schwarz", tol);
    for (std::size_t i = 0; i < spec.count; ++i) {
        const Point x = space.sample(rng, base, spec.radius);
        const Point y = space.sample(rng, base, spec.radius);
        const Point u = space.sample(rng, base, spec.radius);
        const Point v = space.sample(rng, base, spec.radius);
        const Point w = space.sample(rng, base, spec.radius);
        auto inputs = [&] {
            return nlohmann::json{{"x", to_json(x)}, {"y", to_json(y)}, {"u", to_json(u)},
                                  {"v", to_json(v)}, {"w", to_json(w)}};
        };
        const double xy_uv = space.quasilin(x, y, u, v);
        p1.record(std::abs(space.quasilin(x, y, x, y) - sq(space.dist(x, y))), inputs);
        p2.record(std::abs(xy_uv - space.quasilin(u, v, x, y)), inputs);
        p3.record(std::abs(xy_uv + space.quasilin(y, x, u, v)), inputs);
        p4.record(std::abs(xy_uv + space.quasilin(x, y, v, w) - space.quasilin(x, y, u, w)), inputs);
        cs.record(xy_uv - space.dist(x, y) * space.dist(u, v), inputs);
    }
    return {p1.finish(), p2.finish(), p3.finish(), p4.finish(), cs.finish()};
}

}  // namespace tmlab
