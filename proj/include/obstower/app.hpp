#pragma once

// Problem specs in, reports out: the layer behind the command-line tool and
// the python module. Specs and reports are JSON documents whose schemas live
// in schemas/.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace obstower::app {

using json = nlohmann::json;

inline constexpr std::string_view kSpecSchema = "obstower-spec/1";
inline constexpr std::string_view kReportSchema = "obstower-report/1";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kProfileEnv = "OBSTOWER_BUDGET_PROFILE";

struct Budgets {
  std::size_t max_group_order = 512;
  std::uint64_t max_hom_search = 10'000'000;
  std::size_t max_degree = 3;
  std::size_t max_truncation = 6;

  /// "default", "small" or "large"; throws SpecError otherwise.
  static Budgets profile(std::string_view name);
  json to_json() const;
};

/// Malformed or inconsistent spec: exit code 2.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented budget was exceeded: exit code 3.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  Budgets budgets;
  unsigned jobs = 1;  // worker cap; results never depend on it
};

/// Commands: tower, reciprocity, cohomology, lie, simplicial-check, selftest.
/// Returns the full report; throws SpecError, BudgetError, obstower::Error.
json run(const std::string& command, const json& spec, const Options& opts);

/// Exit code and machine-readable error object for an exception escaping run().
struct Failure {
  int exit_code = 1;
  json error;
};
Failure classify(const std::exception& e);

std::string sha256_hex(std::string_view bytes);
/// Report with the timing subobject removed.
json without_timing(json report);
/// Aligned text tables for a report.
std::string render_text(const json& report);

}  // namespace obstower::app
