#include "tmlab/mappings.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "tmlab/errors.hpp"
#include "tracker.hpp"

namespace tmlab {

ConvexFunction ConvexFunction::half_squared_norm(Point center) {
    return ConvexFunction{Kind::HalfSquaredNorm, std::move(center), 0.0};
}

ConvexFunction ConvexFunction::indicator_of_ball(Point center, double radius) {
    if (!(radius > 0.0)) throw InvalidInput("ball radius must be > 0");
    return ConvexFunction{Kind::IndicatorOfBall, std::move(center), radius};
}

struct MappingFamily::Impl {
    Variant variant;
    SpaceModel space;
    Point fixed_point;
    std::optional<RealSequence> gamma;
    double theta = 0.0;
    Point center;
    double radius = 0.0;
    std::optional<ConvexFunction> function;
    std::shared_ptr<const Impl> base;
    double inner_tol = 1e-12;
    std::uint64_t inner_max_iter = 10'000;
};

namespace {

using Impl = MappingFamily::Impl;
using Variant = MappingFamily::Variant;

std::shared_ptr<Impl> blank(Variant v, const SpaceModel& space) {
    auto impl = std::make_shared<Impl>(Impl{v, space, space.origin(), std::nullopt, 0.0, space.origin(), 0.0,
                                            std::nullopt, nullptr, 1e-12, 10'000});
    return impl;
}

Point project_to_ball(const SpaceModel& s, const Point& c, double rho, const Point& x) {
    const double d = s.dist(c, x);
    if (d <= rho) return x;
    return s.comb(c, x, rho / d);
}

Point rotate(const SpaceModel& s, double theta, const Point& x) {
    s.validate(x);
    switch (s.kind()) {
        case ModelKind::Euclidean: {
            auto out = std::get<EuclideanPoint>(x);
            const double c = std::cos(theta), sn = std::sin(theta);
            const double a = out.coords[0], b = out.coords[1];
            out.coords[0] = c * a - sn * b;
            out.coords[1] = sn * a + c * b;
            return out;
        }
        case ModelKind::PoincareDisk: {
            const auto& p = std::get<DiskPoint>(x);
            const std::complex<double> z = std::complex<double>(p.a, p.b) * std::polar(1.0, theta);
            return DiskPoint{z.real(), z.imag()};
        }
        case ModelKind::Tripod: {
            auto p = std::get<TripodPoint>(x);
            const long shift = std::lround(3.0 * theta / (2.0 * std::numbers::pi));
            p.leg = static_cast<int>(((p.leg + shift) % 3 + 3) % 3);
            return p;
        }
    }
    return x;
}

Point apply_impl(const Impl& f, std::uint64_t n, const Point& x);

double step_size(const Impl& f, std::uint64_t n) {
    const double g = (*f.gamma)(n);
    if (!(g > 0.0) || !std::isfinite(g))
        throw InvalidInput("step size gamma_" + std::to_string(n) + " = " + std::to_string(g) + " is not positive");
    return g;
}

Point resolvent_step(const Impl& f, std::uint64_t n, const Point& x) {
    const double g = step_size(f, n);
    const double t = g / (1.0 + g);
    Point z = x;
    double residual = 0.0;
    for (std::uint64_t i = 0; i < f.inner_max_iter; ++i) {
        Point next = f.space.comb(x, apply_impl(*f.base, 0, z), t);
        residual = f.space.dist(next, z);
        z = std::move(next);
        if (residual <= f.inner_tol) return z;
    }
    throw SolverFailure("resolvent inner solve did not converge at n = " + std::to_string(n) + " after " +
                            std::to_string(f.inner_max_iter) + " iterations",
                        residual);
}

Point apply_impl(const Impl& f, std::uint64_t n, const Point& x) {
    switch (f.variant) {
        case Variant::Identity:
            f.space.validate(x);
            return x;
        case Variant::Constant:
            return apply_impl(*f.base, 0, x);
        case Variant::Rotation:
            return rotate(f.space, f.theta, x);
        case Variant::MetricProjection:
            return project_to_ball(f.space, f.center, f.radius, x);
        case Variant::Proximal: {
            const ConvexFunction& fn = *f.function;
            if (fn.kind == ConvexFunction::Kind::IndicatorOfBall)
                return project_to_ball(f.space, fn.center, fn.radius, x);
            const double g = step_size(f, n);
            return f.space.comb(x, fn.center, g / (1.0 + g));
        }
        case Variant::Resolvent:
            return resolvent_step(f, n, x);
    }
    throw std::logic_error("unhandled mapping variant");
}

std::string variant_name(const Impl& f) {
    switch (f.variant) {
        case Variant::Identity: return "identity";
        case Variant::Constant: return "constant(" + variant_name(*f.base) + ")";
        case Variant::Rotation: return "rotation(" + std::to_string(f.theta) + ")";
        case Variant::MetricProjection: return "projection(ball " + to_string(f.center) + ", " + std::to_string(f.radius) + ")";
        case Variant::Proximal:
            return f.function->kind == ConvexFunction::Kind::HalfSquaredNorm
                       ? "proximal(half-squared-norm " + to_string(f.function->center) + ", " + f.gamma->text() + ")"
                       : "proximal(indicator ball " + to_string(f.function->center) + ", " +
                             std::to_string(f.function->radius) + ")";
        case Variant::Resolvent: return "resolvent(" + variant_name(*f.base) + ", " + f.gamma->text() + ")";
    }
    return "?";
}

bool is_constant_sequence(const RealSequence& s) { return s.text().rfind("const:", 0) == 0; }

}  // namespace

MappingFamily MappingFamily::identity(const SpaceModel& space) {
    return MappingFamily(blank(Variant::Identity, space));
}

MappingFamily MappingFamily::constant(const MappingFamily& base) {
    auto impl = blank(Variant::Constant, base.space());
    impl->fixed_point = base.fixed_point();
    impl->base = base.impl_;
    return MappingFamily(impl);
}

MappingFamily MappingFamily::rotation(const SpaceModel& space, double theta) {
    if (!std::isfinite(theta)) throw InvalidInput("rotation angle must be finite");
    if (space.kind() == ModelKind::Euclidean && space.dimension() < 2)
        throw InvalidInput("rotation needs a Euclidean model of dimension >= 2");
    auto impl = blank(Variant::Rotation, space);
    impl->theta = theta;
    return MappingFamily(impl);
}

MappingFamily MappingFamily::metric_projection(const SpaceModel& space, Point center, double radius) {
    space.validate(center);
    if (!(radius > 0.0)) throw InvalidInput("ball radius must be > 0");
    auto impl = blank(Variant::MetricProjection, space);
    impl->center = center;
    impl->radius = radius;
    impl->fixed_point = std::move(center);
    return MappingFamily(impl);
}

MappingFamily MappingFamily::proximal(const SpaceModel& space, ConvexFunction f, RealSequence gamma) {
    space.validate(f.center);
    auto impl = blank(Variant::Proximal, space);
    impl->fixed_point = f.center;
    impl->function = std::move(f);
    impl->gamma = std::move(gamma);
    return MappingFamily(impl);
}

MappingFamily MappingFamily::resolvent(const MappingFamily& base, RealSequence gamma, double inner_tol,
                                       std::uint64_t inner_max_iter) {
    if (!(inner_tol > 0.0)) throw InvalidInput("inner tolerance must be > 0");
    if (inner_max_iter < 1) throw InvalidInput("inner max iterations must be >= 1");
    auto impl = blank(Variant::Resolvent, base.space());
    impl->fixed_point = base.fixed_point();
    impl->base = base.impl_;
    impl->gamma = std::move(gamma);
    impl->inner_tol = inner_tol;
    impl->inner_max_iter = inner_max_iter;
    return MappingFamily(impl);
}

MappingFamily::Variant MappingFamily::variant() const { return impl_->variant; }
std::string MappingFamily::name() const { return variant_name(*impl_); }
const SpaceModel& MappingFamily::space() const { return impl_->space; }
const Point& MappingFamily::fixed_point() const { return impl_->fixed_point; }
const std::optional<RealSequence>& MappingFamily::gamma() const { return impl_->gamma; }

bool MappingFamily::depends_on_n() const {
    switch (impl_->variant) {
        case Variant::Proximal:
            return impl_->function->kind == ConvexFunction::Kind::HalfSquaredNorm &&
                   !is_constant_sequence(*impl_->gamma);
        case Variant::Resolvent:
            return !is_constant_sequence(*impl_->gamma);
        default:
            return false;
    }
}

Point MappingFamily::apply(std::uint64_t n, const Point& x) const { return apply_impl(*impl_, n, x); }

MappingFamily MappingFamily::with_fixed_point(Point p, double tol) const {
    impl_->space.validate(p);
    auto impl = std::make_shared<Impl>(*impl_);
    impl->fixed_point = std::move(p);
    MappingFamily out(impl);
    const AxiomReport r = check_fixed_point(out, 100, tol);
    if (!r.pass)
        throw InvalidInput("point " + to_string(out.fixed_point()) + " is not a common fixed point of " + name());
    return out;
}

AxiomReport check_nonexpansive(const MappingFamily& family, std::uint64_t n_max, const SampleSpec& spec,
                               double tol) {
    spec.validate();
    const SpaceModel& s = family.space();
    Rng rng(spec.seed);
    detail::Tracker t("nonexpansive", tol);
    for (std::size_t i = 0; i < spec.count; ++i) {
        const Point x = s.sample(rng, family.fixed_point(), spec.radius);
        const Point y = s.sample(rng, family.fixed_point(), spec.radius);
        const double dxy = s.dist(x, y);
        for (std::uint64_t n = 0; n <= n_max; ++n) {
            const double dt = s.dist(family.apply(n, x), family.apply(n, y));
            t.record(dt - dxy, [&] {
                return nlohmann::json{{"n", n}, {"x", to_json(x)}, {"y", to_json(y)}, {"n_max", n_max}};
            });
        }
    }
    return t.finish();
}

AxiomReport check_fixed_point(const MappingFamily& family, std::uint64_t n_max, double tol) {
    const SpaceModel& s = family.space();
    const Point& p = family.fixed_point();
    detail::Tracker t("common-fixed-point", tol);
    for (std::uint64_t n = 0; n <= n_max; ++n) {
        const double d = s.dist(family.apply(n, p), p);
        t.record(d, [&] { return nlohmann::json{{"n", n}, {"p", to_json(p)}, {"n_max", n_max}}; });
    }
    return t.finish();
}

AxiomReport check_condition_c1(const MappingFamily& family, const RealSequence& gammas, std::uint64_t n_max,
                               const SampleSpec& spec, double tol) {
    spec.validate();
    std::vector<double> g(n_max + 1);
    for (std::uint64_t n = 0; n <= n_max; ++n) {
        g[n] = gammas(n);
        if (!(g[n] > 0.0)) throw InvalidInput("gamma_" + std::to_string(n) + " is not positive");
    }
    const SpaceModel& s = family.space();
    Rng rng(spec.seed);
    detail::Tracker t("condition-C1", tol);
    std::vector<Point> tx(n_max + 1);
    std::vector<double> moved(n_max + 1);
    for (std::size_t i = 0; i < spec.count; ++i) {
        const Point x = s.sample(rng, family.fixed_point(), spec.radius);
        for (std::uint64_t n = 0; n <= n_max; ++n) {
            tx[n] = family.apply(n, x);
            moved[n] = s.dist(tx[n], x);
        }
        for (std::uint64_t n = 0; n <= n_max; ++n) {
            for (std::uint64_t m = 0; m <= n_max; ++m) {
                if (m == n) continue;
                const double lhs = s.dist(tx[n], tx[m]);
                const double rhs = std::abs(g[m] - g[n]) / g[n] * moved[n];
                t.record(lhs - rhs, [&] {
                    return nlohmann::json{{"n", n}, {"m", m}, {"x", to_json(x)}, {"lhs", lhs}, {"rhs", rhs}};
                });
            }
        }
    }
    return t.finish();
}

bool check_afp_membership(const MappingFamily& family, const Point& x, const Point& p, const BigNat& K,
                          const BigNat& k, std::uint64_t n_max) {
    if (k == 0) throw InvalidInput("approximate fixed points need k >= 1");
    const SpaceModel& s = family.space();
    if (s.dist(x, p) > K.get_d() + 1e-9) return false;
    const double bound = 1.0 / k.get_d();
    for (std::uint64_t n = 0; n <= n_max; ++n) {
        if (s.dist(x, family.apply(n, x)) > bound) return false;
    }
    return true;
}

}  // namespace tmlab
