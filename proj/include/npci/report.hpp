#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include "json.hpp"

#include "npci/lineargc.hpp"
#include "npci/mc.hpp"
#include "npci/resample.hpp"

namespace npci {

inline constexpr std::string_view kToolName = "npci";
inline constexpr std::string_view kToolVersion = "0.1.0";

struct Provenance {
  std::string tool{kToolName};
  std::string version{kToolVersion};
  std::string config_hash;
  std::uint64_t seed = 0;
  // Wall-clock stamps are opt-in; without them a report is a pure function
  // of its inputs.
  std::optional<std::string> started;
  std::optional<std::string> finished;
};

using ReportBody = std::variant<TestResult, McReport, HacRegressionResult>;

struct Report {
  Provenance provenance;
  nlohmann::json config = nlohmann::json::object();
  ReportBody body;
};

// FNV-1a of the canonical dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

enum class ReportFormat { kJson, kCsv };

nlohmann::json to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

// JSON: keys sorted, two-space indent, trailing newline.
std::string to_json_string(const Report& report);

// Rejection-rate table: one row per (statistic, n, bandwidth, a) and one
// column per design S1..P7. An empty report yields the header only.
std::string mc_to_csv(const McReport& report);
std::string to_csv_string(const Report& report);

void emit_report(const Report& report, ReportFormat format, std::ostream& out);
// Throws kIo when the path cannot be written.
void emit_report(const Report& report, ReportFormat format,
                 const std::string& path);

// Component converters, exposed for the Python bindings and tests.
nlohmann::json to_json(const TestResult& r);
nlohmann::json to_json(const McReport& r);
nlohmann::json to_json(const HacRegressionResult& r);
nlohmann::json to_json(const TestConfig& c);

}  // namespace npci
