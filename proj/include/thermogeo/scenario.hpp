#pragma once

#include "thermogeo/error.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thermogeo {

enum class ScenarioKind { flatness2d, flatness3d, inverse_alpha, embed, axisym, linearized, decomposition };

std::string_view to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(std::string_view name);  // ValidationError for unknown names

// Parameters are kept exactly as written; defaults are applied when the scenario runs.
struct Scenario {
  ScenarioKind kind = ScenarioKind::flatness2d;
  std::optional<std::string> name;
  nlohmann::json parameters = nlohmann::json::object();
  std::optional<std::string> output_dir;
};

// ParseError for malformed JSON, ValidationError for unknown, missing or ill-typed keys.
// Diagnostics read "<origin>:<line>: <field path>: <problem>".
Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(const std::string& text, const std::string& origin = "<input>");

// Sorted keys, two-space indent, LF newlines, floats as %.12e, integers as integers.
std::string canonical_json(const nlohmann::json& value);
nlohmann::json scenario_to_json(const Scenario& scenario);
std::string serialize_scenario(const Scenario& scenario);

struct RunOptions {
  std::optional<double> tolerance;  // flatness thresholds; THERMOGEO_TOL applies otherwise
};

struct RunReport {
  Scenario scenario;
  std::map<std::string, double> residuals;
  std::map<std::string, std::string> verdicts;
  std::vector<std::string> artifact_paths;  // relative to the output directory, report.json last
  long long wall_time_ms = 0;
};

// Validates, dispatches to the owning module and writes the artifacts plus report.json into out_dir.
RunReport run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir, const RunOptions& options = {});

// report.json content. Wall time is left out so that reruns are byte-identical.
std::string report_json(const RunReport& report);

// 3 for ParseError / ValidationError, 2 for every other library error.
int exit_code(ErrorKind kind);

}  // namespace thermogeo
