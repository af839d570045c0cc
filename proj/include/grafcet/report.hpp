#pragma once

#include <string>

#include <json.hpp>

#include "grafcet/oracle.hpp"
#include "grafcet/pipeline.hpp"

namespace grafcet {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kReportSchema = "grafcet-lint/report/1";

struct ReportOptions {
    bool dump_invariants = false;
    bool timings = true;
};

// FNV-1a over the canonical serialization, as 16 hex digits.
std::string spec_digest(const GrafcetSpec& spec);

nlohmann::json report_json(const AnalysisResult& r, const ReportOptions& opts = {});
std::string report_text(const AnalysisResult& r, const ReportOptions& opts = {});

nlohmann::json oracle_json(const OracleFacts& facts);

}  // namespace grafcet
