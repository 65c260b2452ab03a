#include "tmlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tmlab/errors.hpp"

namespace tmlab {

nlohmann::json to_json(const CheckResult& r) {
    return {{"check_id", r.check_id},   {"pass", r.pass},         {"hypothesis_status", r.hypothesis_status},
            {"witnesses", r.witnesses}, {"horizons", r.horizons}, {"values", r.values},
            {"notes", r.notes}};
}

namespace {

constexpr const char* kNotInformative = "bound not informative at desk scale (Astronomical)";

void fail(CheckResult& r, nlohmann::json witness) {
    if (r.pass) r.witnesses = std::move(witness);
    r.pass = false;
}

double bound_of(std::uint64_t k) { return 1.0 / static_cast<double>(k + 1); }

CheckResult rate_check(std::string id, const std::vector<double>& values, const RateValue& rate, std::uint64_t k,
                       std::uint64_t cap, double tol) {
    CheckResult r;
    r.check_id = std::move(id);
    const RateValue start_v = rate_arith::max(RateValue(0), rate < RateValue(cap) ? rate : RateValue(cap));
    const std::uint64_t start = start_v.value().get_ui();
    if (values.empty()) throw InsufficientData(r.check_id + ": empty trajectory");
    const std::uint64_t end = std::min<std::uint64_t>(cap, values.size() - 1);
    if (start > end && rate.is_finite())
        throw InsufficientData(r.check_id + ": trajectory ends at " + std::to_string(values.size()) +
                               " values, suffix starts at " + std::to_string(start));
    const double bound = bound_of(k) + tol;
    for (std::uint64_t n = start; n <= end; ++n) {
        if (values[n] > bound) {
            fail(r, {{"n", n}, {"value", values[n]}, {"bound", bound_of(k)}});
            break;
        }
    }
    const auto n0 = first_hit(values, bound);
    if (n0 && RateValue(*n0) > rate) fail(r, {{"first_hit", *n0}, {"rate", rate.to_string()}});
    r.values = {{"k", k}, {"rate", rate.to_string()}, {"first_hit", n0 ? nlohmann::json(*n0) : nlohmann::json()},
                {"astronomical", rate.is_astronomical()}};
    r.horizons = {{"suffix_start", start}, {"suffix_end", end}, {"cap", cap}};
    if (rate.is_astronomical()) r.notes.emplace_back(kNotInformative);
    return r;
}

std::vector<double> step_values(const Trajectory& traj) {
    std::vector<double> out;
    for (const auto& rec : traj.records)
        if (!std::isnan(rec.d_step)) out.push_back(rec.d_step);
    return out;
}

bool window_ok(const Trajectory& traj, std::uint64_t n, std::uint64_t e, double bound) {
    const SpaceModel& s = traj.model_space();
    const Point& xn = traj.records[n].x;
    double radius = 0.0;
    for (std::uint64_t i = n + 1; i <= e; ++i) radius = std::max(radius, s.dist(xn, traj.records[i].x));
    if (radius > bound) return false;
    if (2.0 * radius <= bound) return true;
    for (std::uint64_t i = n + 1; i <= e; ++i)
        for (std::uint64_t j = i + 1; j <= e; ++j)
            if (s.dist(traj.records[i].x, traj.records[j].x) > bound) return false;
    return true;
}

}  // namespace

std::optional<std::uint64_t> first_hit(const std::vector<double>& values, double bound) {
    for (std::size_t i = values.size(); i-- > 0;) {
        if (values[i] > bound) {
            if (i + 1 == values.size()) return std::nullopt;
            return i + 1;
        }
    }
    return 0;
}

CheckResult check_ar(const Trajectory& traj, const RateValue& rate, std::uint64_t k, std::uint64_t cap,
                     double tol) {
    return rate_check("ar", step_values(traj), rate, k, cap, tol);
}

CheckResult check_family_ar(const Trajectory& traj, const MappingFamily& family, const RateValue& rate,
                            std::uint64_t k, std::uint64_t cap, double tol) {
    std::vector<double> vals;
    vals.reserve(traj.records.size());
    if (family.name() == traj.family) {
        for (const auto& rec : traj.records) vals.push_back(rec.d_Tn);
    } else {
        const SpaceModel& s = traj.model_space();
        for (const auto& rec : traj.records) vals.push_back(s.dist(rec.x, family.apply(rec.n, rec.x)));
    }
    return rate_check("family-ar", vals, rate, k, cap, tol);
}

CheckResult check_Tm_ar(const Trajectory& traj, const MappingFamily& family, std::uint64_t m,
                        const RateValue& rate, std::uint64_t k, std::uint64_t cap, double tol) {
    const SpaceModel& s = traj.model_space();
    std::vector<double> vals;
    vals.reserve(traj.records.size());
    for (const auto& rec : traj.records) vals.push_back(s.dist(rec.x, family.apply(m, rec.x)));
    CheckResult r = rate_check("Tm-ar", vals, rate, k, cap, tol);
    r.values["m"] = m;
    return r;
}

MetastableSearch search_metastable(const Trajectory& traj, const MetastabilityQuery& query, double tol) {
    if (query.cap < 1) throw InvalidInput("metastability search cap must be >= 1");
    MetastableSearch out;
    const double bound = bound_of(query.k) + tol;
    const std::uint64_t last = traj.last_index();
    for (std::uint64_t n = 0; n <= query.cap; ++n) {
        const RateValue e = query.f(RateValue(n));
        if (e < RateValue(n)) {
            out.n = n;
            return out;
        }
        if (e > RateValue(last)) {
            out.truncated = true;
            continue;
        }
        ++out.windows_checked;
        if (window_ok(traj, n, e.value().get_ui(), bound)) {
            out.n = n;
            return out;
        }
    }
    return out;
}

CheckResult check_mu(const Trajectory& traj, const MetastabilityQuery& query, const RateValue& mu_value,
                     double tol) {
    CheckResult r;
    r.check_id = "metastability";
    const MetastableSearch found = search_metastable(traj, query, tol);
    r.values = {{"k", query.k},
                {"f", query.f.to_string()},
                {"searched_n", found.n ? nlohmann::json(*found.n) : nlohmann::json()},
                {"mu", mu_value.to_string()},
                {"astronomical", mu_value.is_astronomical()}};
    r.horizons = {{"cap", query.cap}, {"trajectory_end", traj.last_index()}, {"truncated", found.truncated}};
    if (mu_value.is_astronomical()) r.notes.emplace_back(kNotInformative);
    if (found.n) {
        if (RateValue(*found.n) > mu_value) fail(r, {{"searched_n", *found.n}, {"mu", mu_value.to_string()}});
        return r;
    }
    r.hypothesis_status = "vacuous";
    r.notes.emplace_back("no n found within the cap");
    if (mu_value <= RateValue(std::min(query.cap, traj.last_index())) && !found.truncated)
        fail(r, {{"searched_up_to", query.cap}, {"mu", mu_value.to_string()}});
    return r;
}

// ---------------------------------------------------------------------------

SyntheticXuInstance SyntheticXuInstance::from_recurrence(double s0, std::vector<double> a, std::vector<double> v,
                                                         std::vector<double> r, BigNat S, std::string generator) {
    if (a.size() != v.size() || a.size() != r.size()) throw InvalidInput("Xu instance sequences differ in length");
    if (S < 1) throw InvalidInput("S must be >= 1");
    SyntheticXuInstance inst;
    inst.S = S;
    inst.generator = std::move(generator);
    const double cap = S.get_d() + 1e-12;
    inst.s.reserve(a.size() + 1);
    inst.s.push_back(s0);
    for (std::size_t n = 0; n < a.size(); ++n) {
        if (!(a[n] > 0.0 && a[n] < 1.0)) throw InvalidInput("a_" + std::to_string(n) + " is not in (0, 1)");
        inst.s.push_back((1.0 - a[n]) * (inst.s.back() + v[n]) + a[n] * r[n]);
    }
    for (std::size_t n = 0; n < inst.s.size(); ++n)
        if (!(inst.s[n] >= 0.0 && inst.s[n] <= cap))
            throw InvalidInput("s_" + std::to_string(n) + " = " + std::to_string(inst.s[n]) + " leaves [0, S]");
    inst.a = std::move(a);
    inst.v = std::move(v);
    inst.r = std::move(r);
    return inst;
}

SyntheticXuInstance SyntheticXuInstance::telescoping(std::uint64_t length) {
    std::vector<double> a(length);
    for (std::uint64_t n = 0; n < length; ++n) a[n] = 1.0 / static_cast<double>(n + 2);
    return from_recurrence(1.0, a, std::vector<double>(length, 0.0), std::vector<double>(length, 0.0), 1,
                           "telescoping a_n = 1/(n+2)");
}

SyntheticXuInstance SyntheticXuInstance::random(Rng& rng, std::uint64_t k, std::uint64_t q) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::uint64_t length = q + 1;
    const double v_max = 1.0 / (3.0 * static_cast<double>(k + 1) * static_cast<double>(q + 1));
    const double r_max = 1.0 / (3.0 * static_cast<double>(k + 1));
    std::vector<double> a(length), v(length), r(length);
    for (std::uint64_t n = 0; n < length; ++n) {
        const double base = 1.0 / static_cast<double>(n + 2);
        a[n] = base + 0.5 * (1.0 - base) * unit(rng);
        v[n] = v_max * unit(rng);
        r[n] = r_max * unit(rng);
    }
    const double s0 = 0.5 * unit(rng);
    return from_recurrence(s0, a, v, r, 1, "random k=" + std::to_string(k) + " q=" + std::to_string(q));
}

CheckResult check_xu_lemma(const SyntheticXuInstance& inst, XuVariant variant, const Counterfunction& modulus,
                           std::uint64_t k, std::uint64_t n, std::uint64_t q, double tol) {
    CheckResult r;
    r.check_id = variant == XuVariant::Divergence ? "xu-lemma-i" : "xu-lemma-ii";
    r.horizons = {{"n", n}, {"q", q}, {"length", inst.s.size()}};
    if (inst.s.size() <= q) throw InsufficientData("Xu instance shorter than q");

    const double v_max = 1.0 / (3.0 * static_cast<double>(k + 1) * static_cast<double>(q + 1));
    const double r_max = 1.0 / (3.0 * static_cast<double>(k + 1));
    for (std::uint64_t i = n; i <= q && i < inst.a.size(); ++i) {
        if (inst.v[i] > v_max || inst.r[i] > r_max) {
            r.hypothesis_status = "unmet";
            r.witnesses = {{"i", i}, {"v", inst.v[i]}, {"r", inst.r[i]}};
            r.notes.emplace_back("hypotheses unmet");
            return r;
        }
    }

    // The modulus property at the single point the conclusion uses, when it fits in the instance.
    const BigNat j = 3 * inst.S * (k + 1);
    if (variant == XuVariant::Divergence) {
        const BigNat m = n + ceil_ln(j);
        const RateValue idx = modulus(RateValue(m));
        if (idx.is_finite() && idx.value() < inst.a.size()) {
            double sum = 0.0;
            for (std::uint64_t i = 0; i <= idx.value().get_ui(); ++i) sum += inst.a[i];
            if (sum + tol < m.get_d()) {
                r.hypothesis_status = "unmet";
                r.witnesses = {{"m", m.get_str()}, {"partial_sum", sum}};
                r.notes.emplace_back("sigma is not a rate of divergence for this instance");
                return r;
            }
        }
    } else {
        const RateValue idx = modulus(RateValue(BigNat(n)), RateValue(BigNat(j - 1)));
        if (idx.is_finite() && idx.value() < inst.a.size()) {
            double prod = 1.0;
            for (std::uint64_t i = n; i <= idx.value().get_ui(); ++i) prod *= 1.0 - inst.a[i];
            if (prod > 1.0 / j.get_d() + tol) {
                r.hypothesis_status = "unmet";
                r.witnesses = {{"product", prod}, {"index", idx.to_string()}};
                r.notes.emplace_back("sigma_star is not a product rate for this instance");
                return r;
            }
        }
    }

    const RateValue z = variant == XuVariant::Divergence ? zeta(k, n, modulus, inst.S)
                                                          : zeta_star(k, n, modulus, inst.S);
    r.values = {{"k", k}, {"zeta", z.to_string()}};
    if (z > RateValue(q)) {
        r.hypothesis_status = "vacuous";
        r.notes.emplace_back("zeta exceeds q");
        return r;
    }
    const double bound = bound_of(k) + tol;
    for (std::uint64_t i = z.value().get_ui(); i <= q; ++i) {
        if (inst.s[i] > bound) {
            fail(r, {{"i", i}, {"s_i", inst.s[i]}, {"bound", bound_of(k)}});
            break;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------

CheckResult check_recursive_inequalities(const Trajectory& traj, const MappingFamily& family,
                                         const ScheduleBundle& bundle, const Point& x, double tol) {
    const SpaceModel& s = traj.model_space();
    s.validate(x);
    CheckResult r;
    r.check_id = "recursive-inequalities";
    const Point& u = traj.anchor;
    const double dxu = s.dist(x, u);
    double worst[3] = {-INFINITY, -INFINITY, -INFINITY};
    for (std::size_t idx = 0; idx + 1 < traj.records.size(); ++idx) {
        const auto& rec = traj.records[idx];
        const Point& x_next = traj.records[idx + 1].x;
        const std::uint64_t n = rec.n;
        const double beta = bundle.beta(n);
        const RateValue Bn = bundle.B(RateValue(n));
        const double B = Bn.is_finite() ? Bn.value().get_d() : INFINITY;

        const Point Tx = family.apply(n, x);
        const double dTx = s.dist(Tx, x);
        const double dun = s.dist(rec.u_n, x);
        const double dxn = s.dist(rec.x, x);
        const double dnext = s.dist(x_next, x);
        const double ql = s.quasilin(x, u, x, rec.x);
        const double w = 2.0 * dun * dTx + dTx * dTx;

        const double viol[3] = {
            dnext - (dun + dTx),
            dun * dun - (beta * dxn * dxn + 2.0 * beta * (1.0 - beta) * ql + (1.0 - beta) * (1.0 - beta) * dxu * dxu),
            dnext * dnext -
                (beta * (dxn * dxn + B * w) + (1.0 - beta) * (2.0 * beta * ql) + (1.0 - beta) * dxu * dxu),
        };
        for (int part = 0; part < 3; ++part) {
            worst[part] = std::max(worst[part], viol[part]);
            if (viol[part] > tol)
                fail(r, {{"n", n}, {"part", part + 1}, {"violation", viol[part]}, {"x", to_json(x)}});
        }
    }
    r.values = {{"max_violation_i", worst[0]}, {"max_violation_ii", worst[1]}, {"max_violation_iii", worst[2]}};
    r.horizons = {{"steps", traj.last_index()}};
    return r;
}

std::vector<double> t_grid(std::size_t points) {
    if (points < 2) throw InvalidInput("t grid needs at least 2 points");
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) g[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

CheckResult check_convex_afp(const MappingFamily& family, const Point& v1, const Point& v2, const Point& p,
                             const BigNat& K, const BigNat& k, std::uint64_t n_max, const std::vector<double>& grid) {
    const SpaceModel& s = family.space();
    CheckResult r;
    r.check_id = "afp-convex";
    r.horizons = {{"n_max", n_max}, {"t_points", grid.size()}};
    const double premise = 1.0 / omega1(k, K).get_d();
    const double conclusion = 1.0 / (k.get_d() + 1.0);
    r.values = {{"omega1", omega1(k, K).get_str()}};
    for (const Point* v : {&v1, &v2}) {
        bool ok = s.dist(*v, p) <= K.get_d() + 1e-9;
        for (std::uint64_t n = 0; ok && n <= n_max; ++n) ok = s.dist(*v, family.apply(n, *v)) < premise;
        if (!ok) {
            r.hypothesis_status = "unmet";
            r.notes.emplace_back("hypotheses unmet");
            r.witnesses = {{"v", to_json(*v)}};
            return r;
        }
    }
    for (double t : grid) {
        const Point w = s.comb(v1, v2, t);
        for (std::uint64_t n = 0; n <= n_max; ++n) {
            const double d = s.dist(w, family.apply(n, w));
            if (!(d < conclusion)) {
                fail(r, {{"t", t}, {"n", n}, {"d", d}});
                return r;
            }
        }
    }
    return r;
}

CheckResult check_variational(const SpaceModel& space, const Point& x, const Point& y, const Point& u,
                              const Point& p, const BigNat& K, const BigNat& k, const std::vector<double>& grid,
                              double tol) {
    CheckResult r;
    r.check_id = "afp-variational";
    r.horizons = {{"t_points", grid.size()}};
    if (space.dist(x, p) > K.get_d() + 1e-9 || space.dist(y, p) > K.get_d() + 1e-9) {
        r.hypothesis_status = "unmet";
        r.notes.emplace_back("x or y outside B_p(K)");
        return r;
    }
    const double slack = 1.0 / omega2(k, K).get_d();
    const double dxu2 = std::pow(space.dist(x, u), 2);
    for (double t : grid) {
        const double dwu = space.dist(space.comb(x, y, t), u);
        if (dxu2 > dwu * dwu + slack) {
            r.hypothesis_status = "unmet";
            r.notes.emplace_back("hypotheses unmet");
            r.witnesses = {{"t", t}, {"d2_xu", dxu2}, {"d2_wu", dwu * dwu}};
            return r;
        }
    }
    const double ql = space.quasilin(x, u, x, y);
    r.values = {{"quasilin", ql}, {"bound", 1.0 / (k.get_d() + 1.0)}};
    if (ql > 1.0 / (k.get_d() + 1.0) + tol) fail(r, {{"quasilin", ql}});
    return r;
}

CheckResult check_chi_T_series(const Trajectory& traj, const MappingFamily& family, const Counterfunction& chi_T,
                               std::uint64_t k_max, double tol) {
    const SpaceModel& s = traj.model_space();
    CheckResult r;
    r.check_id = "chi-T-series";
    const std::size_t len = traj.records.size();
    if (len < 2) throw InsufficientData("chi_T series needs at least two records");
    // tail[n] = Σ_{i=n}^{len-2} d(T_{i+1}u_i, T_i u_i)
    std::vector<long double> tail(len, 0.0L);
    for (std::size_t i = len - 1; i-- > 0;) {
        const Point& ui = traj.records[i].u_n;
        tail[i] = tail[i + 1] + s.dist(family.apply(i + 1, ui), family.apply(i, ui));
    }
    nlohmann::json per_k = nlohmann::json::array();
    for (std::uint64_t k = 0; k <= k_max; ++k) {
        const RateValue c = chi_T(RateValue(k));
        if (c >= RateValue(len - 2)) {
            per_k.push_back({{"k", k}, {"chi_T", c.to_string()}, {"status", "vacuous"}});
            continue;
        }
        const double sum = static_cast<double>(tail[c.value().get_ui() + 1]);
        per_k.push_back({{"k", k}, {"chi_T", c.to_string()}, {"tail", sum}});
        if (sum > bound_of(k) + tol) fail(r, {{"k", k}, {"chi_T", c.to_string()}, {"tail", sum}});
    }
    r.values = {{"per_k", per_k}, {"total", static_cast<double>(tail[0])}};
    r.horizons = {{"steps", traj.last_index()}, {"k_max", k_max}};
    return r;
}

// ---------------------------------------------------------------------------

RateSystem Scenario::rates(std::uint64_t bit_cap) const {
    if (family.depends_on_n()) return RateSystem::for_family_with_c1(bundle, bounds.K, bit_cap);
    return RateSystem::for_constant_family(bundle, bounds.K, bit_cap);
}

Scenario make_scenario(std::string name, SpaceModel space, MappingFamily family, ScheduleBundle bundle, Point u,
                       Point x0, std::optional<BigNat> K) {
    space.validate(u);
    space.validate(x0);
    const Point& p = family.fixed_point();
    const double M = std::max(space.dist(x0, p), space.dist(u, p));
    ScenarioBounds bounds = ScenarioBounds::from_distance(M, std::move(K));
    return Scenario{std::move(name), std::move(space), std::move(family), std::move(bundle),
                    std::move(u),    std::move(x0),    std::move(bounds)};
}

Scenario identity_scenario() {
    const SpaceModel s = SpaceModel::euclidean(1);
    return make_scenario("identity-line", s, MappingFamily::identity(s), preset("harmonic"), EuclideanPoint{{0.0}},
                         EuclideanPoint{{1.0}});
}

std::vector<Scenario> scenario_matrix() {
    struct ModelSetup {
        SpaceModel space;
        Point u, x0;
    };
    const std::vector<ModelSetup> models = {
        {SpaceModel::euclidean(2), EuclideanPoint{{-0.3, 0.4}}, EuclideanPoint{{1.0, 0.0}}},
        {SpaceModel::poincare_disk(), DiskPoint{-0.2, 0.3}, DiskPoint{0.4, 0.0}},
        {SpaceModel::tripod(), TripodPoint{1, 0.5}, TripodPoint{0, 1.0}},
    };
    const ScheduleBundle bundle = preset("harmonic");
    std::vector<Scenario> out;
    for (const auto& m : models) {
        const Point c = m.space.origin();
        const std::vector<std::pair<std::string, MappingFamily>> families = {
            {"identity", MappingFamily::identity(m.space)},
            {"rotation", MappingFamily::rotation(m.space, std::numbers::pi / 2)},
            {"projection", MappingFamily::metric_projection(m.space, c, 0.5)},
            {"proximal", MappingFamily::proximal(m.space, ConvexFunction::half_squared_norm(c), bundle.gamma)},
        };
        for (const auto& [fname, family] : families)
            out.push_back(make_scenario(m.space.name() + "/" + fname, m.space, family, bundle, m.u, m.x0));
    }
    return out;
}

}  // namespace tmlab
