#include "tmlab/engine.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>

#include "tmlab/errors.hpp"
#include "tracker.hpp"

namespace tmlab {

IterationState IterationState::initial(const Point& anchor, const Point& x0) {
    IterationState s;
    s.x = x0;
    s.anchor = anchor;
    s.x0 = x0;
    return s;
}

IterationState step(const IterationState& state, const MappingFamily& family, const ScheduleBundle& bundle,
                    const SpaceModel& space) {
    const std::uint64_t n = state.n;
    IterationState next = state;
    Point u_n = space.comb(state.anchor, state.x, bundle.beta(n));
    next.x = space.comb(u_n, family.apply(n, u_n), bundle.lambda(n));
    next.u_n = std::move(u_n);
    next.n = n + 1;
    return next;
}

const SpaceModel& Trajectory::model_space() const {
    if (!space) throw std::logic_error("trajectory has no space model attached");
    return *space;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string scenario_hash(const SpaceModel& space, const MappingFamily& family, const ScheduleBundle& bundle,
                          const Point& u, const Point& x0) {
    std::string text = space.name() + "|" + family.name() + "|" + bundle.name + "|" + bundle.lambda.text() + "|" +
                       bundle.beta.text() + "|" + bundle.gamma.text() + "|";
    for (double c : coordinates(u)) text += format_double(c) + ",";
    text += "|";
    for (double c : coordinates(x0)) text += format_double(c) + ",";
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

Trajectory run(const SpaceModel& space, const MappingFamily& family, const ScheduleBundle& bundle,
               const Point& u, const Point& x0, std::uint64_t steps) {
    if (steps < 1) throw InvalidInput("steps must be >= 1");
    space.validate(u);
    space.validate(x0);
    Trajectory t;
    t.space = std::make_shared<const SpaceModel>(space);
    t.model = space.name();
    t.family = family.name();
    t.scenario_hash = scenario_hash(space, family, bundle, u, x0);
    t.anchor = u;
    t.p = family.fixed_point();
    t.records.reserve(steps + 1);

    IterationState state = IterationState::initial(u, x0);
    try {
        for (std::uint64_t n = 0; n <= steps; ++n) {
            TrajectoryRecord r;
            r.n = n;
            r.x = state.x;
            r.d_Tn = space.dist(state.x, family.apply(n, state.x));
            r.d_p = space.dist(state.x, t.p);
            if (n < steps) {
                state = step(state, family, bundle, space);
                r.u_n = *state.u_n;
                r.d_step = space.dist(r.x, state.x);
            } else {
                r.u_n = space.comb(u, state.x, bundle.beta(n));
                r.d_step = std::numeric_limits<double>::quiet_NaN();
            }
            t.records.push_back(std::move(r));
        }
    } catch (const SolverFailure& e) {
        t.error = e.what();
        t.error_residual = e.residual();
    }
    return t;
}

namespace {

std::vector<double> axpby(double a, const std::vector<double>& x, double b, const std::vector<double>& y) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
    return out;
}

}  // namespace

AxiomReport check_hilbert_special_case(const SpaceModel& space, const MappingFamily& family,
                                       const ScheduleBundle& bundle, const Point& x0, std::uint64_t steps,
                                       double tol) {
    if (space.kind() != ModelKind::Euclidean) throw InvalidInput("the Hilbert special case needs a Euclidean model");
    space.validate(x0);
    const Point origin = space.origin();
    IterationState state = IterationState::initial(origin, x0);
    std::vector<double> y = std::get<EuclideanPoint>(x0).coords;
    detail::Tracker t("hilbert-special-case", tol);
    for (std::uint64_t n = 0; n < steps; ++n) {
        const double beta = bundle.beta(n);
        const double lambda = bundle.lambda(n);
        const std::vector<double> by = axpby(beta, y, 0.0, y);
        const Point Tby = family.apply(n, EuclideanPoint{by});
        y = axpby(1.0 - lambda, by, lambda, std::get<EuclideanPoint>(Tby).coords);
        state = step(state, family, bundle, space);
        const double dev = space.dist(state.x, EuclideanPoint{y});
        t.record(dev - tol * static_cast<double>(n + 1), [&] {
            return nlohmann::json{{"n", n + 1}, {"deviation", dev}, {"eq2", to_json(state.x)}, {"eq1", y}};
        });
    }
    return t.finish();
}

void write_csv(std::ostream& out, const Trajectory& traj) {
    out << "# model=" << traj.model << " family=" << traj.family << " scenario=" << traj.scenario_hash << "\n";
    out << "n";
    if (!traj.records.empty()) {
        const Point& first = traj.records.front().x;
        if (std::holds_alternative<EuclideanPoint>(first)) {
            const auto dim = std::get<EuclideanPoint>(first).coords.size();
            for (std::size_t i = 0; i < dim; ++i) out << ",x_" << i;
        } else if (std::holds_alternative<DiskPoint>(first)) {
            out << ",a,b";
        } else {
            out << ",leg,length";
        }
    }
    out << ",d_step,d_Tn,d_p\n";
    for (const auto& r : traj.records) {
        out << r.n;
        if (const auto* tp = std::get_if<TripodPoint>(&r.x)) {
            out << "," << tp->leg << "," << format_double(tp->length);
        } else {
            for (double c : coordinates(r.x)) out << "," << format_double(c);
        }
        out << "," << (std::isnan(r.d_step) ? std::string() : format_double(r.d_step)) << ","
            << format_double(r.d_Tn) << "," << format_double(r.d_p) << "\n";
    }
    if (traj.error) out << "# error: " << *traj.error << " (residual " << format_double(traj.error_residual) << ")\n";
}

}  // namespace tmlab
