#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "tmlab/errors.hpp"
#include "tmlab/verify.hpp"

namespace tmlab {

/// Malformed or inconsistent configuration; the message names the line or key.
class ConfigError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// Flat `key = value` text with dotted keys. `#` starts a comment. Unknown and
/// duplicate keys are rejected.
///
///   space.kind        euclidean | poincare-disk | tripod     (default euclidean)
///   space.dim         Euclidean dimension                    (default 2)
///   family.kind       identity | constant | rotation | projection | proximal | resolvent
///   family.base       inner map of constant/resolvent: identity | rotation | projection
///   family.theta      rotation angle
///   family.center     coordinates of the ball / prox center  (default origin)
///   family.radius     ball radius
///   family.function   half-squared-norm | indicator-ball     (proximal)
///   family.gamma      γ sequence                             (default schedule γ)
///   family.inner_tol, family.inner_max_iter                  (resolvent)
///   schedule.preset   harmonic | constant-gamma-harmonic-beta
///   schedule.<field>  lambda beta gamma (sequences); sigma sigma_star chi_beta
///                     chi_lambda chi_gamma eta B (counterfunctions);
///                     Lambda N_Lambda Gamma N_Gamma G (naturals)
///   run.u, run.x0     coordinates (tripod: leg, length)
///   run.steps, run.seed
///   rates.K           overrides ⌈M⌉
///   rates.chi_T       auto | counterfunction
///   rates.phi, rates.f, rates.bit_cap
///   verify.tol
class ConfigFile {
public:
    static ConfigFile parse(const std::string& text, const std::string& origin = "config");
    static ConfigFile load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    std::optional<std::string> find(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    const std::string& origin() const { return origin_; }

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    [[noreturn]] void fail_at(const std::string& key, const std::string& what) const;

    std::string origin_;
    std::map<std::string, Entry> values_;
};

struct ScenarioConfig {
    Scenario scenario;
    std::optional<Counterfunction> chi_T;  ///< nullopt means auto
    std::optional<Counterfunction> phi;
    Counterfunction f = Counterfunction::constant(0);
    std::uint64_t bit_cap = kDefaultBitCap;
    std::uint64_t steps = 100;
    std::uint64_t seed = 0;
    double tol = 1e-9;

    /// Rate system using chi_T when given, the scenario default otherwise.
    RateSystem rates() const;
};

ScenarioConfig build_scenario(const ConfigFile& cfg);

}  // namespace tmlab
