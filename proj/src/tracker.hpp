#pragma once

#include <functional>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "tmlab/geometry.hpp"

namespace tmlab::detail {

// Running maximum of a signed violation together with the inputs that produced it.
class Tracker {
public:
    Tracker(std::string axiom, double tol) { report_.axiom = std::move(axiom); report_.tolerance = tol;
        report_.max_violation = -std::numeric_limits<double>::infinity(); }

    void record(double violation, const std::function<nlohmann::json()>& inputs) {
        ++report_.samples;
        if (violation > report_.max_violation) {
            report_.max_violation = violation;
            report_.worst_case_inputs = inputs();
        }
    }

    AxiomReport finish() {
        if (report_.samples == 0) report_.max_violation = 0.0;
        report_.pass = report_.max_violation <= report_.tolerance;
        return std::move(report_);
    }

private:
    AxiomReport report_;
};

}  // namespace tmlab::detail
