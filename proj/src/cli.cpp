#include "tmlab/cli.hpp"

#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "tmlab/config.hpp"
#include "tmlab/errors.hpp"

namespace tmlab {

namespace {

// Writes to --out/--report when given, else to the command's output stream.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << text;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct RunArgs {
    std::string config;
    std::optional<std::uint64_t> steps;
    std::string out;
};

struct RatesArgs {
    std::string config;
    std::uint64_t k_max = 0;
    std::string which;
    std::string out;
};

struct MetaArgs {
    std::string config;
    std::uint64_t k = 0;
    std::string cf;
    std::string phi;
    std::uint64_t cap = 1'000'000;
    std::optional<std::uint64_t> steps;
    std::string report;
};

struct VerifyArgs {
    VerifyOptions options;
    std::string report;
};

int cmd_run(const RunArgs& a, std::ostream& out) {
    const ScenarioConfig cfg = build_scenario(ConfigFile::load(a.config));
    const std::uint64_t steps = a.steps.value_or(cfg.steps);
    if (steps < 1) throw ConfigError("steps must be >= 1");
    const Scenario& s = cfg.scenario;
    spdlog::info("run {} for {} steps", s.family.name(), steps);
    const Trajectory t = run(s.space, s.family, s.bundle, s.u, s.x0, steps);
    std::ostringstream csv;
    write_csv(csv, t);
    emit(a.out, out, csv.str());
    if (t.error) {
        spdlog::error("{}", *t.error);
        return kExitSolverFailure;
    }
    return kExitOk;
}

int cmd_rates(const RatesArgs& a, std::ostream& out) {
    const ScenarioConfig cfg = build_scenario(ConfigFile::load(a.config));
    std::vector<std::string> which = a.which.empty() ? RateSystem::names() : split_list(a.which);
    const auto names = RateSystem::names();
    for (const auto& w : which)
        if (std::find(names.begin(), names.end(), w) == names.end()) throw ConfigError("unknown rate '" + w + "'");
    const RateSystem rs = cfg.rates();
    std::ostringstream csv;
    csv << "k";
    for (const auto& w : which) csv << "," << w;
    csv << "\n";
    for (std::uint64_t k = 0; k <= a.k_max; ++k) {
        csv << k;
        for (const auto& w : which) {
            spdlog::debug("rates: {}({})", w, k);
            csv << "," << rs.value(w, big(k), cfg.f, cfg.phi).to_string();
        }
        csv << "\n";
    }
    emit(a.out, out, csv.str());
    return kExitOk;
}

int cmd_metastable(const MetaArgs& a, std::ostream& out) {
    const ScenarioConfig cfg = build_scenario(ConfigFile::load(a.config));
    Counterfunction f = cfg.f;
    std::optional<Counterfunction> phi = cfg.phi;
    try {
        if (!a.cf.empty()) f = Counterfunction::parse(a.cf);
        if (!a.phi.empty()) phi = Counterfunction::parse(a.phi);
    } catch (const InvalidInput& e) {
        throw ConfigError(std::string("counterfunction: ") + e.what());
    }
    if (a.cap < 1) throw ConfigError("--cap must be >= 1");
    const std::uint64_t steps = a.steps.value_or(cfg.steps);
    if (steps < 1) throw ConfigError("steps must be >= 1");
    const Scenario& s = cfg.scenario;
    const Trajectory t = run(s.space, s.family, s.bundle, s.u, s.x0, steps);
    if (t.error) {
        spdlog::error("{}", *t.error);
        return kExitSolverFailure;
    }
    const RateSystem rs = cfg.rates();
    const MetastabilityQuery q{a.k, f, a.cap};
    const RateValue mu_star = rs.mu_star(big(a.k), f, phi);
    const RateValue mu = rs.mu(big(a.k), f, phi);
    const CheckResult r_star = check_mu(t, q, mu_star, cfg.tol);
    const CheckResult r = check_mu(t, q, mu, cfg.tol);
    const bool pass = r_star.pass && r.pass;
    nlohmann::json report = {{"scenario_hash", t.scenario_hash},
                             {"k", a.k},
                             {"f", f.to_string()},
                             {"phi", phi ? phi->to_string() : "default"},
                             {"cap", a.cap},
                             {"steps", steps},
                             {"searched_n", r_star.values["searched_n"]},
                             {"truncated", r_star.horizons["truncated"]},
                             {"mu", mu.to_string()},
                             {"mu_star", mu_star.to_string()},
                             {"pass", pass},
                             {"checks", {to_json(r), to_json(r_star)}}};
    emit(a.report, out, report.dump(2) + "\n");
    return pass ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
    const nlohmann::json report = run_verify_suite(a.options);
    emit(a.report, out, report.dump(2) + "\n");
    return report["pass"] == true ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tikhonov-Mann iteration laboratory"};
    app.require_subcommand(1);
    std::string log_level = "warn";
    app.add_option("--log-level", log_level, "error | warn | info | debug")
        ->check(CLI::IsMember({"error", "warn", "info", "debug"}));

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "write a trajectory CSV");
    run_cmd->add_option("config", run_args.config)->required();
    run_cmd->add_option("--steps", run_args.steps, "overrides run.steps");
    run_cmd->add_option("--out", run_args.out);

    RatesArgs rates_args;
    auto* rates_cmd = app.add_subcommand("rates", "tabulate rate formulas");
    rates_cmd->add_option("config", rates_args.config)->required();
    rates_cmd->add_option("--k-max", rates_args.k_max);
    rates_cmd->add_option("--which", rates_args.which, "comma-separated rate names");
    rates_cmd->add_option("--out", rates_args.out);

    MetaArgs meta_args;
    auto* meta_cmd = app.add_subcommand("metastable", "search a metastability window and compare with mu");
    meta_cmd->add_option("config", meta_args.config)->required();
    meta_cmd->add_option("--k", meta_args.k);
    meta_cmd->add_option("--cf", meta_args.cf, "counterfunction f");
    meta_cmd->add_option("--phi", meta_args.phi, "overrides the rate Phi");
    meta_cmd->add_option("--cap", meta_args.cap);
    meta_cmd->add_option("--steps", meta_args.steps, "overrides run.steps");
    meta_cmd->add_option("--report", meta_args.report);

    VerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
    verify_cmd->add_option("--suite", verify_args.options.suite)->check(CLI::IsMember(verify_suites()));
    verify_cmd->add_option("--seed", verify_args.options.seed);
    verify_cmd->add_option("--samples", verify_args.options.samples)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--tol", verify_args.options.tol)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--report", verify_args.report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("tmlab", sink);
    logger->set_level(spdlog::level::from_str(log_level));
    logger->set_pattern("[%l] %v");
    auto previous = spdlog::default_logger();
    spdlog::set_default_logger(logger);
    struct Restore {
        std::shared_ptr<spdlog::logger> prev;
        ~Restore() { spdlog::set_default_logger(prev); }
    } restore{previous};

    try {
        if (*run_cmd) return cmd_run(run_args, out);
        if (*rates_cmd) return cmd_rates(rates_args, out);
        if (*meta_cmd) return cmd_metastable(meta_args, out);
        return cmd_verify(verify_args, out);
    } catch (const SolverFailure& e) {
        err << "solver failure: " << e.what() << " (residual " << e.residual() << ")\n";
        return kExitSolverFailure;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

}  // namespace tmlab
