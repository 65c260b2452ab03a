#include "tmlab/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace tmlab {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "space.kind",          "space.dim",           "family.kind",          "family.base",
        "family.theta",        "family.center",       "family.radius",        "family.function",
        "family.gamma",        "family.inner_tol",    "family.inner_max_iter", "schedule.preset",
        "schedule.lambda",     "schedule.beta",       "schedule.gamma",       "schedule.sigma",
        "schedule.sigma_star", "schedule.chi_beta",   "schedule.chi_lambda",  "schedule.chi_gamma",
        "schedule.eta",        "schedule.B",          "schedule.Lambda",      "schedule.N_Lambda",
        "schedule.Gamma",      "schedule.N_Gamma",    "schedule.G",           "run.u",
        "run.x0",              "run.steps",           "run.seed",             "rates.K",
        "rates.chi_T",         "rates.phi",           "rates.f",              "rates.bit_cap",
        "verify.tol",
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_coords(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw InvalidInput("bad coordinate '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw InvalidInput("empty coordinate list");
    return out;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (known_keys().count(key) == 0) throw ConfigError(where + "unknown key '" + key + "'");
        if (value.empty()) throw ConfigError(where + "empty value for '" + key + "'");
        if (cfg.values_.count(key) != 0)
            throw ConfigError(where + "duplicate key '" + key + "' (first set on line " +
                              std::to_string(cfg.values_[key].line) + ")");
        cfg.values_[key] = Entry{value, lineno};
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

void ConfigFile::fail_at(const std::string& key, const std::string& what) const {
    const auto it = values_.find(key);
    const std::string line = it == values_.end() ? "" : std::to_string(it->second.line) + ":";
    throw ConfigError(origin_ + ":" + line + " " + key + ": " + what);
}

std::optional<std::string> ConfigFile::find(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second.value;
}

std::string ConfigFile::get(const std::string& key, const std::string& fallback) const {
    return find(key).value_or(fallback);
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
    const auto v = find(key);
    if (!v) return fallback;
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(*v, &used);
    } catch (const std::exception&) {
        fail_at(key, "expected a real number, got '" + *v + "'");
    }
    if (used != v->size()) fail_at(key, "expected a real number, got '" + *v + "'");
    return out;
}

std::uint64_t ConfigFile::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto v = find(key);
    if (!v) return fallback;
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || ptr != v->data() + v->size()) fail_at(key, "expected a natural number, got '" + *v + "'");
    return out;
}

RateSystem ScenarioConfig::rates() const {
    if (!chi_T) return scenario.rates(bit_cap);
    return RateSystem(scenario.bundle, scenario.bounds.K, *chi_T, bit_cap);
}

namespace {

template <class F>
auto keyed(const ConfigFile& cfg, const std::string& key, F&& fn) -> decltype(fn(std::string())) {
    const auto v = cfg.find(key);
    try {
        return fn(v.value_or(""));
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidInput& e) {
        throw ConfigError(cfg.origin() + ": " + key + ": " + e.what());
    }
}

SpaceModel build_space(const ConfigFile& cfg) {
    const std::string kind = cfg.get("space.kind", "euclidean");
    if (kind == "euclidean") {
        const auto dim = cfg.get_u64("space.dim", 2);
        if (dim < 1) throw ConfigError(cfg.origin() + ": space.dim must be >= 1");
        return SpaceModel::euclidean(dim);
    }
    if (cfg.has("space.dim")) throw ConfigError(cfg.origin() + ": space.dim only applies to euclidean");
    if (kind == "poincare-disk") return SpaceModel::poincare_disk();
    if (kind == "tripod") return SpaceModel::tripod();
    throw ConfigError(cfg.origin() + ": space.kind: unknown model '" + kind + "'");
}

ScheduleBundle build_bundle(const ConfigFile& cfg) {
    ScheduleBundle b = keyed(cfg, "schedule.preset", [&](const std::string&) {
        return preset(cfg.get("schedule.preset", "harmonic"));
    });
    bool custom = false;
    auto seq = [&](const char* field, RealSequence& target) {
        const std::string key = std::string("schedule.") + field;
        if (!cfg.has(key)) return;
        target = keyed(cfg, key, [](const std::string& v) { return RealSequence::parse(v); });
        custom = true;
    };
    auto cf = [&](const char* field, Counterfunction& target) {
        const std::string key = std::string("schedule.") + field;
        if (!cfg.has(key)) return;
        target = keyed(cfg, key, [](const std::string& v) { return Counterfunction::parse(v); });
        custom = true;
    };
    auto nat = [&](const char* field, BigNat& target) {
        const std::string key = std::string("schedule.") + field;
        if (!cfg.has(key)) return;
        target = keyed(cfg, key, [](const std::string& v) { return parse_big(v); });
        custom = true;
    };
    seq("lambda", b.lambda);
    seq("beta", b.beta);
    seq("gamma", b.gamma);
    cf("sigma", b.sigma);
    cf("sigma_star", b.sigma_star);
    cf("chi_beta", b.chi_beta);
    cf("chi_lambda", b.chi_lambda);
    cf("chi_gamma", b.chi_gamma);
    cf("eta", b.eta);
    cf("B", b.B);
    nat("Lambda", b.Lambda);
    nat("N_Lambda", b.N_Lambda);
    nat("Gamma", b.Gamma);
    nat("N_Gamma", b.N_Gamma);
    nat("G", b.G);
    if (!custom) return b;
    b.name += "+custom";
    b.notes.clear();
    return keyed(cfg, "schedule.preset", [&](const std::string&) { return finalize(std::move(b)); });
}

Point coords_point(const ConfigFile& cfg, const SpaceModel& space, const std::string& key,
                   const std::optional<Point>& fallback) {
    if (!cfg.has(key)) {
        if (fallback) return *fallback;
        throw ConfigError(cfg.origin() + ": missing required key '" + key + "'");
    }
    return keyed(cfg, key, [&](const std::string& v) {
        const auto c = parse_coords(v);
        return space.make_point(c);
    });
}

MappingFamily simple_family(const ConfigFile& cfg, const SpaceModel& space, const std::string& kind) {
    return keyed(cfg, "family.kind", [&](const std::string&) {
        if (kind == "identity") return MappingFamily::identity(space);
        if (kind == "rotation") {
            if (!cfg.has("family.theta")) throw ConfigError(cfg.origin() + ": rotation needs family.theta");
            return MappingFamily::rotation(space, cfg.get_double("family.theta", 0.0));
        }
        if (kind == "projection") {
            if (!cfg.has("family.radius")) throw ConfigError(cfg.origin() + ": projection needs family.radius");
            return MappingFamily::metric_projection(space, coords_point(cfg, space, "family.center", space.origin()),
                                                    cfg.get_double("family.radius", 0.0));
        }
        throw ConfigError(cfg.origin() + ": unknown map kind '" + kind + "'");
    });
}

MappingFamily build_family(const ConfigFile& cfg, const SpaceModel& space, const ScheduleBundle& bundle) {
    const std::string kind = cfg.get("family.kind", "identity");
    const RealSequence gamma = cfg.has("family.gamma")
                                   ? keyed(cfg, "family.gamma", [](const std::string& v) { return RealSequence::parse(v); })
                                   : bundle.gamma;
    if (kind == "constant") return MappingFamily::constant(simple_family(cfg, space, cfg.get("family.base", "identity")));
    if (kind == "resolvent") {
        const MappingFamily base = simple_family(cfg, space, cfg.get("family.base", "identity"));
        return keyed(cfg, "family.inner_tol", [&](const std::string&) {
            return MappingFamily::resolvent(base, gamma, cfg.get_double("family.inner_tol", 1e-12),
                                            cfg.get_u64("family.inner_max_iter", 10'000));
        });
    }
    if (kind == "proximal") {
        const Point center = coords_point(cfg, space, "family.center", space.origin());
        const std::string fn = cfg.get("family.function", "half-squared-norm");
        return keyed(cfg, "family.function", [&](const std::string&) {
            if (fn == "half-squared-norm")
                return MappingFamily::proximal(space, ConvexFunction::half_squared_norm(center), gamma);
            if (fn == "indicator-ball")
                return MappingFamily::proximal(
                    space, ConvexFunction::indicator_of_ball(center, cfg.get_double("family.radius", 0.0)), gamma);
            throw ConfigError(cfg.origin() + ": family.function: unknown function '" + fn + "'");
        });
    }
    return simple_family(cfg, space, kind);
}

}  // namespace

ScenarioConfig build_scenario(const ConfigFile& cfg) {
    const SpaceModel space = build_space(cfg);
    ScheduleBundle bundle = build_bundle(cfg);
    MappingFamily family = build_family(cfg, space, bundle);
    const Point u = coords_point(cfg, space, "run.u", std::nullopt);
    const Point x0 = coords_point(cfg, space, "run.x0", std::nullopt);
    std::optional<BigNat> K;
    if (cfg.has("rates.K")) K = keyed(cfg, "rates.K", [](const std::string& v) { return parse_big(v); });

    Scenario scenario = keyed(cfg, "rates.K", [&](const std::string&) {
        return make_scenario(cfg.origin(), space, family, bundle, u, x0, K);
    });

    std::optional<Counterfunction> chi_T;
    if (const auto v = cfg.find("rates.chi_T"); v && *v != "auto")
        chi_T = keyed(cfg, "rates.chi_T", [](const std::string& s) { return Counterfunction::parse(s); });
    std::optional<Counterfunction> phi;
    if (cfg.has("rates.phi"))
        phi = keyed(cfg, "rates.phi", [](const std::string& s) { return Counterfunction::parse(s); });
    Counterfunction f = cfg.has("rates.f")
                            ? keyed(cfg, "rates.f", [](const std::string& s) { return Counterfunction::parse(s); })
                            : Counterfunction::constant(0);

    ScenarioConfig out{std::move(scenario), chi_T, phi, f, cfg.get_u64("rates.bit_cap", kDefaultBitCap),
                       cfg.get_u64("run.steps", 100), cfg.get_u64("run.seed", 0), cfg.get_double("verify.tol", 1e-9)};
    if (out.bit_cap < 64) throw ConfigError(cfg.origin() + ": rates.bit_cap must be >= 64");
    return out;
}

}  // namespace tmlab
