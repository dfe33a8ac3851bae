#pragma once

#include "subcurv/config.hpp"

namespace subcurv {

// Per-point validation outcome; check names: "submersion", "structure",
// "model_fit".  ok=false downgrades to a warning unless a model-form theorem
// depends on it.
struct ValidationRecord {
    int point_index = -1;  // -1: applies to the whole run
    std::string check;
    double residual = 0;
    bool ok = true;
    std::string note;
};

struct ErrorRecord {
    int point_index = -1;
    std::string theorem;
    std::string message;
};

struct RunResult {
    int point_index = 0;
    InequalityReport report;
};

struct RunReport {
    std::string config_hash;
    std::vector<ValidationRecord> validations;
    std::vector<RunResult> results;
    std::vector<ErrorRecord> errors;
};

// Run every requested theorem at every point (optionally filtered), in
// deterministic order: points outside, theorems in config order inside.
// Checker failures are recorded and the run continues.
RunReport run_verify(const RunConfig& cfg, int point_filter = -1,
                     const std::vector<std::string>& theorem_filter = {});

// Serialization.  JSON embeds the canonical config and round-trips; CSV has
// the fixed columns point_index,theorem,lhs,rhs,gap,holds,equality,
// worst_equality_residual with floats at 17 significant digits.
std::string emit_json(const RunConfig& cfg, const RunReport& rep);
std::string emit_csv(const RunReport& rep);
void write_report(const RunConfig& cfg, const RunReport& rep, const std::string& path,
                  const std::string& format);

// 0: all requested theorems hold; 2: some gap is genuinely negative;
// 1: errors prevented a verdict.
int exit_code(const RunReport& rep);

}  // namespace subcurv
