#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpineq/suite.hpp"

namespace mpineq {

/// Instance `index` of the mixed fuzz corpus for `seed`: cycles through
/// matrix, hypergraph, sequence and interval constructors.
Source random_source(std::uint64_t seed, std::size_t index);

/// Greedy shrinking: drop one v-atom (rescaling columns back to the original
/// constant) or e-atom at a time, then round values to 3 significant digits,
/// keeping each step only while `still_fails` holds.
Instance shrink(const Instance& inst, const std::function<bool(const Instance&)>& still_fails);

struct FuzzViolation {
  std::string instance_id;
  SourceKind kind = SourceKind::matrix;
  CheckResult result;
  Instance original;
  Instance shrunk;
};

struct CheckTally {
  std::size_t runs = 0;
  std::size_t violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // signed gap in the asserted direction
};

struct InstanceBlock {
  std::string instance_id;
  SourceKind kind = SourceKind::matrix;
  std::size_t p = 0;
  std::size_t q = 0;
  std::size_t rows = 0;
  std::size_t skipped = 0;
  std::size_t violations = 0;
  std::string error;  // non-empty if the instance was rejected as invalid input
};

struct FuzzReport {
  std::uint64_t seed = 0;
  std::size_t instances_tried = 0;
  std::size_t rows_evaluated = 0;
  std::size_t identity_failures = 0;
  std::vector<InstanceBlock> blocks;
  std::vector<FuzzViolation> violations;
  std::map<std::string, CheckTally> tallies;  // keyed by "check|phi"

  std::size_t asserted_violations() const noexcept;
  std::size_t informational_violations() const noexcept;
  /// Violation rows only, CSV as for run_checks.
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// Evaluates `count` corpus instances (in parallel when OpenMP is enabled)
/// and assembles the report in index order.
FuzzReport fuzz(const SuiteConfig& config, std::size_t count);

}  // namespace mpineq
