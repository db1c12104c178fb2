#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mpineq/convexity.hpp"
#include "mpineq/measure_model.hpp"

namespace mpineq {

/// Column integrals must agree with the first one within this fraction of |c|.
inline constexpr double kDefaultColumnTol = 1e-9;

struct DegreeProfile {
  std::vector<double> delta;     // delta(v) = sum_e M(v,e) wt(e) tau_e
  std::vector<double> v_masses;  // mu_v, copied from the instance
  double s = 0.0;                // total weight mass
  double c = 0.0;                // common column integral
  double delta_bar = 0.0;        // mu-average of delta, from the definition
  double delta_bar_identity = 0.0;  // c s / mu(V)
  double mu_total = 0.0;
  double max_column_deviation = 0.0;
  /// d rho = delta / (c s) d mu; absent unless c s > 0 and delta >= 0.
  std::optional<std::vector<double>> rho;

  double min_delta() const;
  double max_delta() const;
  double spread() const { return max_delta() - min_delta(); }
  /// max - min <= rel * |delta_bar|
  bool is_constant(double rel = 1e-7) const;
};

/// Computes delta, s, c, delta_bar and rho.
/// Throws Error(zero_weight_mass) when s <= 0, Error(non_constant_columns)
/// when a column integral differs from the first by more than
/// column_tol * |c|, Error(non_finite) for a non-finite delta.
DegreeProfile characterize(const Instance& inst, double column_tol = kDefaultColumnTol);

struct HypothesisEntry {
  std::string id;  // "i" .. "vi"
  std::string description;
  bool passed = false;
  double quantity = 0.0;
  std::string note;
};

struct HypothesisReport {
  std::array<HypothesisEntry, 6> entries;

  bool all_passed() const noexcept;
  /// "(iv) ..." for the first failing entry, empty when all pass.
  std::string first_failure() const;
};

/// Evaluates the six integrability/structure hypotheses on the atoms. Never
/// throws for a failing hypothesis; failures are entries in the report.
HypothesisReport check_hypotheses(const Instance& inst, const PhiSpec& phi, double column_tol = kDefaultColumnTol);

}  // namespace mpineq
