#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace tflab {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string summary;  // one line, deterministic
    nlohmann::json data;  // measured values, rounded
    double seconds = 0.0; // wall time, not part of the report
};

struct AcceptanceOptions {
    /// Criterion ids to run; empty runs all 13.
    std::vector<int> only;
    /// Called after each criterion finishes.
    std::function<void(const CriterionResult&)> on_result;
};

constexpr int kCriteria = 13;

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

/// Report without timings, so reruns are byte-identical.
nlohmann::json acceptance_json(const std::vector<CriterionResult>& results);

/// "PASS  3 Duality: ..." style line.
std::string format_line(const CriterionResult& r);

/// Canonical text of a fixed set of parallel computations; compared across thread counts.
std::string determinism_probe();

}  // namespace tflab
