// Reproduction suites: each section recomputes a group of published numbers and
// compares them with the expected values.
#pragma once

#include "hmk/basis.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hmk {

enum class ReportFormat { Json, Csv, Text };

ReportFormat report_format_from_name(const std::string& name);

struct RunConfig {
    Tolerances tol;
    std::uint64_t budget = 1000000000;
    std::uint64_t seed = 1;
    int workers = 0;
    ReportFormat format = ReportFormat::Json;
    std::string output_path;
    std::size_t average_samples = 100000;  // per dimension
    std::size_t scan_bases = 1000000;      // random-set scan size

    /// Throws InvalidInput unless tolerances are positive and budget > 0.
    void validate() const;
};

struct ClaimResult {
    std::string section;
    std::string claim;
    std::string expected;
    std::string observed;
    bool pass = false;
    double seconds = 0.0;
    nlohmann::json raw;  // full-precision values
};

const std::vector<std::string>& reproduce_sections();

/// Runs one section ("s5-12", "s5-24", "s6", "s7-b1", "s7-b2", "s8", "s4-average",
/// "roots-357", "equivalences"). Throws InvalidInput for an unknown name.
std::vector<ClaimResult> reproduce_section(const std::string& section, const RunConfig& config);

/// Runtimes are left out so that reruns give identical bytes.
nlohmann::json claims_to_json(const std::vector<ClaimResult>& claims, bool with_runtimes = false);

/// Value rounded to `digits` decimals, e.g. 0.9311 -> "0.93".
std::string rounded(double value, int digits = 2);

}  // namespace hmk
