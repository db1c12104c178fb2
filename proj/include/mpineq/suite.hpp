#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mpineq/convexity.hpp"
#include "mpineq/degree.hpp"
#include "mpineq/hypergraph.hpp"
#include "mpineq/inequalities.hpp"
#include "mpineq/measure_model.hpp"

namespace mpineq {

struct SuiteConfig {
  /// Check names (see known_checks()); "all" selects every asserted check.
  std::vector<std::string> checks{"all"};
  std::vector<std::string> phi_list{"log", "id"};
  double tol = 1e-9;
  double eq_tol = 1e-9;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  double column_tol = kDefaultColumnTol;
  std::vector<double> chain_exponents{0.5, 1.0, 2.0, 3.0};
  std::vector<double> marginal_exponents{1.5, 2.0, 3.0};
  /// Defaults to erasing the last e-atom.
  std::optional<std::vector<bool>> erase_mask;

  Tolerance tolerance() const noexcept { return {tol, tol, eq_tol}; }
  /// Throws Error(invalid_argument) / Error(parse).
  void validate() const;
};

/// Names accepted in SuiteConfig::checks, asserted ones first.
const std::vector<std::string>& known_checks();
const std::vector<std::string>& asserted_checks();

enum class SourceKind { file, matrix, hypergraph, sequence, interval };
std::string_view to_string(SourceKind kind);

/// An instance plus whatever structure it was built from, which unlocks the
/// hypergraph and sequence checks.
struct Source {
  std::string id;
  SourceKind kind = SourceKind::file;
  Instance instance;
  std::optional<Interval> domain;
  std::optional<Hypergraph> hypergraph;
  std::optional<SequenceModel> sequence;
};

Source source_from_instance_file(const std::filesystem::path& path);
Source source_from_hypergraph_file(const std::filesystem::path& path);

/// matrix:p=..,q=..,c=..  hypergraph:p=..,q=..,k=..[,regular=1]
/// sequence:n=..[,ratio_a=..,ratio_u=..]  interval:nodes=..[,rule=..,amp=..]
Source generate_source(std::string_view spec, std::uint64_t seed, std::string id = "gen");

struct ReportRow {
  std::string instance_id;
  CheckResult result;
};

struct SkippedCheck {
  std::string instance_id;
  std::string check;
  std::string phi;
  std::string reason;
};

struct SuiteReport {
  std::vector<ReportRow> rows;
  std::vector<SkippedCheck> skipped;

  std::size_t asserted_violations() const noexcept;
  std::size_t informational_violations() const noexcept;
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// Runs every selected check that applies to the source; inapplicable ones are
/// listed in `skipped`. Throws Error for invalid input (e.g. zero weight
/// mass) and Error(invalid_argument) when nothing applies.
SuiteReport run_checks(const Source& source, const SuiteConfig& config);

/// "pow:<from>..<to>:<step>" -> exponents, inclusive of <to>.
std::vector<double> parse_power_family(std::string_view family);

/// One row per exponent: main inequality where f is convex on the delta range,
/// concave reversal where it is concave, skipped otherwise.
SuiteReport sweep(const Source& source, std::string_view family, const SuiteConfig& config);

}  // namespace mpineq
