#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pscontact/chart.hpp"
#include "pscontact/contact_checks.hpp"

namespace pscontact {

enum class Suite { Axioms, Identities, Codazzi, Sectional, CR, All };

const char* suite_name(Suite s);
std::optional<Suite> suite_from_name(const std::string& name);

enum class CheckStatus { Pass, Fail, Indeterminate, Skipped, Contradiction };

const char* status_name(CheckStatus s);

struct CheckRecord {
    std::string check_id;
    std::string paper_ref;
    double max_residual = 0.0;
    double tolerance = 0.0;
    int points_tested = 0;
    int probes_skipped_null = 0;
    CheckStatus status = CheckStatus::Skipped;
    std::string note;
};

struct CheckReport {
    std::string engine_version;
    std::string spec_digest;
    std::string spec_name;
    std::uint64_t seed = 0;
    std::string suite;
    std::string profile;
    int points = 0;
    int evaluation_errors = 0;           // sample points whose evaluation threw
    std::vector<CheckRecord> records;
    ClassificationResult classification;
    std::vector<std::string> notes;

    bool any_failure() const;
    bool nothing_evaluated() const { return points > 0 && evaluation_errors == points; }
};

struct EngineOptions {
    Suite suite = Suite::All;
    std::optional<std::uint64_t> seed;
    std::optional<int> points;
    std::string profile = "default";              // strict | default | loose
    std::map<std::string, double> tol_overrides;  // wins over spec-file settings
    int threads = 0;                              // 0 = hardware concurrency
};

// Reads PSEUDOCONTACT_TOL; falls back to "default".
std::string tolerance_profile_from_env();

// Runs the selected suites over the deterministic sample set and assembles
// the report. Sample evaluation is a parallel map; aggregation is an ordered
// reduction, so the report depends only on (spec, options, engine version).
CheckReport run_checks(const StructureSpec& spec, const EngineOptions& options,
                       const std::string& digest);

// Classification only (used by cmd_classify and the catalog self-test).
ClassificationResult classify(const StructureSpec& spec, const EngineOptions& options);

std::string report_to_json(const CheckReport& report);
std::string report_to_text(const CheckReport& report);

} // namespace pscontact
