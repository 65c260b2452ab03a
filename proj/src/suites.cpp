#include <algorithm>
#include <numbers>

#include <spdlog/spdlog.h>

#include "tmlab/cli.hpp"
#include "tmlab/errors.hpp"
#include "tmlab/verify.hpp"

namespace tmlab {

namespace {

using Json = nlohmann::json;

class Collector {
public:
    void add(const CheckResult& r, const std::string& scenario) {
        Json j = to_json(r);
        j["scenario_hash"] = scenario;
        push(std::move(j));
    }

    void add(const AxiomReport& r, const std::string& scope) {
        push({{"check_id", scope + "/" + r.axiom},
              {"scenario_hash", scope},
              {"pass", r.pass},
              {"hypothesis_status", "met"},
              {"witnesses", r.pass ? Json::object() : r.worst_case_inputs},
              {"horizons", {{"samples", r.samples}}},
              {"values", {{"max_violation", r.max_violation}, {"tolerance", r.tolerance}}}});
    }

    Json finish(const VerifyOptions& o) {
        std::stable_sort(checks_.begin(), checks_.end(),
                         [](const Json& a, const Json& b) { return a["check_id"] < b["check_id"]; });
        const bool ok = std::all_of(checks_.begin(), checks_.end(), [](const Json& c) { return c["pass"] == true; });
        return {{"suite", o.suite}, {"seed", o.seed}, {"samples", o.samples}, {"tol", o.tol},
                {"pass", ok},       {"checks", checks_}};
    }

private:
    void push(Json j) {
        if (j["pass"] != true) spdlog::warn("check failed: {}", j["check_id"].get<std::string>());
        checks_.push_back(std::move(j));
    }
    std::vector<Json> checks_;
};

std::string hash_of(const Scenario& s) { return scenario_hash(s.space, s.family, s.bundle, s.u, s.x0); }

CheckResult tag(CheckResult r, const std::string& prefix) {
    r.check_id = prefix + "/" + r.check_id;
    return r;
}

void geometry_suite(const VerifyOptions& o, const std::vector<SpaceModel>& models, Collector& out) {
    std::vector<SpaceModel> shipped = models;
    if (shipped.empty()) shipped = {SpaceModel::euclidean(2), SpaceModel::poincare_disk(), SpaceModel::tripod()};
    const SampleSpec spec{o.seed, o.samples, 2.0};
    for (const auto& m : shipped) {
        spdlog::info("geometry: {}", m.name());
        for (const auto& r : check_w_axioms(m, spec, o.tol)) out.add(r, m.name());
        for (const auto& r : check_cn(m, spec, o.tol)) out.add(r, m.name());
        out.add(check_uniform_convexity(m, spec, o.tol), m.name());
        for (const auto& r : check_quasilin_axioms(m, spec, o.tol)) out.add(r, m.name());
    }
}

void schedules_suite(const VerifyOptions& o, Collector& out) {
    for (const auto& name : preset_names()) {
        spdlog::info("schedules: auditing {}", name);
        const AuditReport report = audit_schedule(preset(name), 100'000, o.tol);
        for (const auto& c : report.conditions) {
            CheckResult r;
            r.check_id = "audit/" + name + "/" + c.condition_id;
            r.pass = c.pass;
            r.horizons = {{"horizon", c.horizon}, {"checked", c.checked}};
            if (!c.pass) r.witnesses = c.first_violation;
            if (!c.mode.empty()) r.values = {{"mode", c.mode}};
            out.add(r, name);
        }
    }
    const SampleSpec spec{o.seed, std::min<std::size_t>(o.samples, 200), 1.5};
    std::vector<MappingFamily> families;
    for (const auto& s : scenario_matrix()) families.push_back(s.family);
    const SpaceModel e2 = SpaceModel::euclidean(2);
    families.push_back(MappingFamily::resolvent(MappingFamily::rotation(e2, std::numbers::pi / 3), preset("harmonic").gamma));
    for (const auto& f : families) {
        const std::string scope = f.space().name() + "/" + f.name();
        out.add(check_nonexpansive(f, 20, spec, o.tol), scope);
        out.add(check_fixed_point(f, 1000, o.tol), scope);
        if (f.gamma()) out.add(check_condition_c1(f, *f.gamma(), 50, spec, o.tol), scope);
    }
}

void engine_suite(const VerifyOptions& o, Collector& out) {
    const Scenario id = identity_scenario();
    const Trajectory t = run(id.space, id.family, id.bundle, id.u, id.x0, 1000);
    CheckResult closed;
    closed.check_id = "engine/closed-form";
    double worst = 0.0;
    for (const auto& r : t.records) worst = std::max(worst, std::abs(coordinates(r.x)[0] - 1.0 / double(r.n + 1)));
    closed.values = {{"max_deviation", worst}};
    closed.horizons = {{"steps", 1000}};
    closed.pass = worst <= 1e-12;
    out.add(closed, t.scenario_hash);

    const SpaceModel e2 = SpaceModel::euclidean(2);
    const ScheduleBundle h = preset("harmonic");
    const Point x0 = EuclideanPoint{{1.0, 0.5}};
    for (const auto& f : {MappingFamily::identity(e2), MappingFamily::rotation(e2, std::numbers::pi / 3),
                          MappingFamily::proximal(e2, ConvexFunction::half_squared_norm(e2.origin()), h.gamma)})
        out.add(check_hilbert_special_case(e2, f, h, x0, 100, 1e-10), "hilbert/" + f.name());

    for (const auto& s : scenario_matrix()) {
        const Trajectory tr = run(s.space, s.family, s.bundle, s.u, s.x0, 10'000);
        CheckResult r;
        r.check_id = "engine/bounded/" + s.name;
        double worst_excess = -INFINITY;
        for (const auto& rec : tr.records) {
            const double e = std::max(rec.d_p, s.space.dist(rec.u_n, tr.p)) - s.bounds.M;
            worst_excess = std::max(worst_excess, e);
        }
        r.values = {{"M", s.bounds.M}, {"max_excess", worst_excess}};
        r.horizons = {{"steps", 10'000}};
        r.pass = worst_excess <= o.tol && !tr.error;
        out.add(r, tr.scenario_hash);
    }
}

void lemmas_suite(const VerifyOptions& o, Collector& out) {
    const ScheduleBundle h = preset("harmonic");
    {
        const auto inst = SyntheticXuInstance::telescoping(1000);
        CheckResult all;
        all.check_id = "xu/telescoping";
        for (std::uint64_t k = 0; k <= 50; ++k) {
            const CheckResult r = check_xu_lemma(inst, XuVariant::Product, h.sigma_star, k, 0, 1000, o.tol);
            if (!r.pass || r.hypothesis_status != "met") {
                all.pass = all.pass && r.pass;
                all.witnesses = {{"k", k}, {"result", to_json(r)}};
            }
        }
        all.horizons = {{"k_max", 50}, {"q", 1000}};
        out.add(all, inst.generator);
    }
    {
        Rng rng(o.seed);
        CheckResult all;
        all.check_id = "xu/random";
        std::size_t tested = 0;
        for (int i = 0; i < 100; ++i) {
            const std::uint64_t k = rng() % 6;
            const std::uint64_t q = 200 + rng() % 801;
            const std::uint64_t n = rng() % 5;
            const auto inst = SyntheticXuInstance::random(rng, k, q);
            for (auto variant : {XuVariant::Product, XuVariant::Divergence}) {
                const auto& mod = variant == XuVariant::Product ? h.sigma_star : h.sigma;
                const CheckResult r = check_xu_lemma(inst, variant, mod, k, n, q, o.tol);
                if (r.hypothesis_status == "met") ++tested;
                if (!r.pass || r.hypothesis_status == "unmet") {
                    all.pass = false;
                    all.witnesses = {{"instance", i}, {"result", to_json(r)}};
                }
            }
        }
        all.values = {{"conclusions_tested", tested}};
        all.horizons = {{"instances", 100}};
        out.add(all, "random");
    }

    const auto matrix = scenario_matrix();
    for (const auto& s : matrix) {
        const std::string hs = hash_of(s);
        const RateSystem rs = s.rates();
        const Trajectory tr = run(s.space, s.family, s.bundle, s.u, s.x0, 100'000);
        spdlog::info("lemmas: {}", s.name);
        for (std::uint64_t k = 0; k <= 5; ++k) {
            out.add(tag(check_ar(tr, rs.Sigma_star(k), k, 100'000, o.tol), s.name + "/k" + std::to_string(k)), hs);
            out.add(tag(check_family_ar(tr, s.family, rs.Sigma_tilde_star(k), k, 100'000, o.tol),
                        s.name + "/k" + std::to_string(k)),
                    hs);
        }
        if (s.family.depends_on_n())
            out.add(tag(check_chi_T_series(tr, s.family, rs.chi_T(), 20, 1e-8), s.name), hs);

        const Trajectory shortrun = run(s.space, s.family, s.bundle, s.u, s.x0, 1000);
        Rng rng(o.seed + 17);
        for (int i = 0; i < 10; ++i) {
            const Point x = s.space.sample(rng, s.family.fixed_point(), 1.5);
            out.add(tag(check_recursive_inequalities(shortrun, s.family, s.bundle, x, o.tol),
                        s.name + "/x" + std::to_string(i)),
                    hs);
        }
        for (std::uint64_t k = 0; k <= 3; ++k) {
            for (const char* f : {"const:0", "id", "affine:2,0"}) {
                const MetastabilityQuery q{k, Counterfunction::parse(f), 1'000'000};
                out.add(tag(check_mu(tr, q, rs.mu_star(k, q.f), o.tol),
                            s.name + "/k" + std::to_string(k) + "/" + f),
                        hs);
            }
        }
        const Point& p = s.family.fixed_point();
        const Point v1 = s.space.comb(p, s.x0, 0.001);
        const Point v2 = s.space.comb(p, s.u, 0.001);
        out.add(tag(check_convex_afp(s.family, v1, v2, p, s.bounds.K, 0, 50, t_grid()), s.name), hs);
    }

    const SpaceModel e2 = SpaceModel::euclidean(2);
    const Point u = EuclideanPoint{{0.5, 1.0}};
    const Point x = EuclideanPoint{{0.5, 0.0}};
    const Point y = EuclideanPoint{{1.0, 0.0}};
    out.add(check_variational(e2, x, y, u, e2.origin(), 1, 3, t_grid(), o.tol), "euclidean(2)/projection-on-segment");
}

}  // namespace

std::vector<std::string> verify_suites() { return {"geometry", "schedules", "engine", "lemmas", "all"}; }

nlohmann::json run_verify_suite(const VerifyOptions& options, const std::vector<SpaceModel>& models) {
    const auto names = verify_suites();
    if (std::find(names.begin(), names.end(), options.suite) == names.end())
        throw InvalidInput("unknown suite '" + options.suite + "'");
    if (options.samples < 1) throw InvalidInput("samples must be >= 1");
    if (!(options.tol > 0.0)) throw InvalidInput("tol must be > 0");
    Collector out;
    const bool all = options.suite == "all";
    if (all || options.suite == "geometry") geometry_suite(options, models, out);
    if (all || options.suite == "schedules") schedules_suite(options, out);
    if (all || options.suite == "engine") engine_suite(options, out);
    if (all || options.suite == "lemmas") lemmas_suite(options, out);
    return out.finish(options);
}

}  // namespace tmlab
