#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mpineq/convexity.hpp"
#include "mpineq/degree.hpp"
#include "mpineq/measure_model.hpp"

namespace mpineq {

enum class Relation { at_least, at_most };
enum class Status { holds, violated, equality };

std::string_view to_string(Status status);

struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-9;
  double eq = 1e-9;

  /// abs + rel * max(|lhs|, |rhs|)
  double effective(double lhs, double rhs) const noexcept;
};

/// Relative agreement required between the double-sum lhs and the
/// (1/s) sum f(delta) mu form.
inline constexpr double kIdentityTolerance = 1e-9;

struct CheckResult {
  std::string check_name;
  std::string phi = "-";
  Relation relation = Relation::at_least;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // lhs - rhs, or lhs - bound for the stability refinement
  /// Secondary value: refined lower bound (stability), smallest trial value
  /// (variational scan).
  std::optional<double> bound;
  Status status = Status::holds;
  bool equality_flag = false;
  double tol = 0.0;
  bool asserted = true;  // false for rows reproducing a statement as printed

  std::optional<double> lhs_identity;  // key-identity route for lhs
  bool identity_ok = true;
  std::optional<bool> delta_constant;
  std::string note;

  bool violated() const noexcept { return status == Status::violated; }
};

/// Fills tol, status and equality_flag from lhs, rhs and gap. A key-identity
/// mismatch forces status to violated.
void finalize(CheckResult& result, const Tolerance& tol);

struct StabilityParams {
  double alpha = 0.0;
  double m = 0.0;
  double M = 0.0;
  double variance_term = 0.0;  // alpha / (2 s) sum (delta - delta_bar)^2 mu
};

/// alpha from estimate_alpha on [m, M]; defaults to [min delta, max delta].
/// Throws Error(invalid_argument) if the range does not cover delta.
StabilityParams stability_params(const DegreeProfile& profile, const PhiSpec& phi,
                                 std::optional<std::pair<double, double>> range = std::nullopt);

CheckResult main_inequality(const Instance& inst, const DegreeProfile& profile, const PhiSpec& phi,
                            const Tolerance& tol = {});

/// gap is the refinement slack lhs - rhs - variance_term; bound = rhs + variance_term.
CheckResult stability_check(const Instance& inst, const DegreeProfile& profile, const PhiSpec& phi,
                            const StabilityParams& params, const Tolerance& tol = {});

CheckResult concave_reversal(const Instance& inst, const DegreeProfile& profile, const PhiSpec& phi,
                             const Tolerance& tol = {});

/// lhs = F(delta) of the given profile, rhs = F(constant delta_bar), bound =
/// smallest F over `trials` random admissible profiles.
CheckResult variational_scan(const DegreeProfile& profile, const PhiSpec& phi, std::size_t trials,
                             std::uint64_t seed, const Tolerance& tol = {});

enum class PowerMeanVariant { normalized, paper_literal };

/// One result per consecutive exponent pair (ascending input).
std::vector<CheckResult> power_mean_chain(const Instance& inst, const DegreeProfile& profile,
                                          std::span<const double> exponents, PowerMeanVariant variant,
                                          const Tolerance& tol = {});

/// {marginal form, product form} for a single p >= 1.
std::vector<CheckResult> marginal_power_mean(const Instance& inst, const DegreeProfile& profile, double p,
                                             const Tolerance& tol = {});

CheckResult entropy_check(const Instance& inst, const DegreeProfile& profile, const Tolerance& tol = {});

/// Restricts weights, recomputes the profile, and runs main_inequality with
/// the unchanged column constant. Throws Error(zero_weight_mass) if nothing
/// survives.
CheckResult erasure_check(const Instance& inst, const std::vector<bool>& erased, const PhiSpec& phi,
                          const Tolerance& tol = {}, double column_tol = kDefaultColumnTol);

enum class GeometricVariant { normalized, paper_literal };

CheckResult geometric_mean_check(const Instance& inst, const DegreeProfile& profile, const Tolerance& tol = {},
                                 GeometricVariant variant = GeometricVariant::normalized);

/// {phi-dependent diagonal-kernel inequality, logarithmic product inequality}.
/// The second is reported in log domain.
std::pair<CheckResult, CheckResult> sequence_inequalities(const SequenceModel& model, const PhiSpec& phi,
                                                          const Tolerance& tol = {});

}  // namespace mpineq
