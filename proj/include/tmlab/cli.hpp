#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tmlab/geometry.hpp"

namespace tmlab {

/// Process exit codes of the tmlab executable.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitConfigError = 2,
    kExitSolverFailure = 3,
};

struct VerifyOptions {
    std::string suite = "all";  ///< geometry | schedules | engine | lemmas | all
    std::uint64_t seed = 0;
    std::size_t samples = 10'000;
    double tol = 1e-9;
};

/// Suite names accepted by run_verify_suite.
std::vector<std::string> verify_suites();

/// Runs a verification suite and returns the report
/// {suite, seed, samples, tol, pass, checks: [{check_id, scenario_hash, pass, ...}]}.
/// A nonempty `models` replaces the three shipped models in the geometry suite.
nlohmann::json run_verify_suite(const VerifyOptions& options, const std::vector<SpaceModel>& models = {});

/// Entry point of the tmlab executable; returns an ExitCode.
int main_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tmlab
