#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gradval/graded.hpp"
#include "gradval/groupoid.hpp"
#include "gradval/pattern.hpp"

namespace gradval {

inline constexpr const char* kVersion = "0.1.0";

/// A loaded scenario file: the G-skewfield, an optional subring pattern with
/// its ideals, named elements, an optional groupoid order and the claims the
/// checks compare against.
struct Scenario {
  std::string id;
  std::string title;
  std::string anchor;
  std::filesystem::path source;

  QPtr q;
  std::optional<BoundPattern> subring;
  std::vector<std::pair<std::string, BoundPattern>> ideals;
  /// Further subrings over the same Q, used for equivalence checks.
  std::vector<std::pair<std::string, BoundPattern>> rings;
  std::vector<std::pair<std::string, GradedElement>> elements;
  std::optional<GroupoidOrder> order;
  /// The [expect] table, converted to JSON.
  nlohmann::json expect = nlohmann::json::object();
  /// Check ids run by reproduce, in file order.
  std::vector<std::string> checks;

  const BoundPattern& ideal(const std::string& name) const;
  const GradedElement& element(const std::string& name) const;
};

/// Parses and validates a scenario. Throws ParseError (with line and key) or
/// ValidationError / InvalidTwist / UnknownElement for inconsistent content.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text, const std::string& source_name = "<string>");

/// Every check id in execution order.
const std::vector<std::string>& all_checks();

enum class Status { Pass, Fail, Skipped };
std::string to_string(Status s);

struct CheckOutcome {
  std::string id;
  Status status = Status::Pass;
  std::string detail;
  std::vector<std::string> witnesses;
  nlohmann::json data = nlohmann::json::object();
  double seconds = 0;
};

struct RunOptions {
  std::uint64_t seed = 1;
  int window = 6;
  bool slow = false;
  bool timing = false;
  /// Restricts the run to these ids (still in execution order); empty = all.
  std::vector<std::string> only;
};

struct Report {
  std::string scenario;
  std::string title;
  std::string anchor;
  RunOptions options;
  std::vector<CheckOutcome> checks;

  bool passed() const;
  /// 0 when every executed check passed, 2 otherwise.
  int exit_code() const { return passed() ? 0 : 2; }
  nlohmann::json to_json() const;
  std::string to_text() const;
};

Report run_checks(const Scenario& s, const RunOptions& options);

/// Names accepted by reproduce.
const std::vector<std::string>& reproducible_examples();
/// Loads corpus/<name>.toml and runs its check list. Throws UnknownExample.
Report reproduce(const std::string& name, const std::filesystem::path& corpus_dir, RunOptions options);

}  // namespace gradval
