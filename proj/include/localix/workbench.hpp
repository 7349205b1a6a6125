#pragma once

// Scenario loading, built-in fixtures, the verification commands and report
// emission behind the `localix` command line tool.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "localix/fixtures.hpp"

namespace localix {

inline constexpr const char* kScenarioSchema = "localix-scenario/1";
inline constexpr const char* kReportSchema = "localix-report/1";

struct Scenario {
  std::string name;
  std::string description;
  Algebra algebra;
  std::vector<AlgebraDerivation> derivations;  // the derivations every check runs with
  std::vector<NamedModule> modules;
  std::optional<GabrielFilter> filter;  // when absent, every filter is enumerated
  Bounds bounds;
};

/// Parses and validates scenario JSON. `origin` names the source in errors.
/// Throws ParseError on malformed text and ValidationError on law violations.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<scenario>");

/// Reads a file, or a built-in fixture given as `builtin:<name>`.
Scenario load_scenario(const std::string& path_or_builtin);

/// The scenario JSON describing a built-in fixture.
nlohmann::ordered_json builtin_scenario_json(const FixtureAlgebra& fixture);
std::vector<Scenario> builtin_fixtures();

struct Record {
  std::string check;
  std::string anchor;
  std::string subject;
  bool passed = true;
  std::string witness;
};

struct Report {
  std::string scenario;
  std::string command;
  std::vector<Record> records;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();

  void add(const std::string& subject, const Verdict& v);
  void add(const std::string& subject, const LawReport& r);
  void add(std::string check, std::string anchor, std::string subject, bool passed, std::string witness = {});

  std::size_t failures() const;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"validate", "ideals",  "filters",   "torsion",
                                              "localize", "extend", "verify-all"};
  return names;
}

/// Runs one command. Bound violations propagate as SizeLimitError.
Report run(const std::string& command, const Scenario& scenario);

std::string render_json(const Report& report);
std::string render_text(const Report& report);

/// The anchor strings a record may carry.
const std::vector<std::string>& known_anchors();

}  // namespace localix
