#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mpineq {

enum class ErrorKind {
  dimension_mismatch,
  non_finite,
  non_positive_mass,
  invalid_argument,
  zero_weight_mass,
  non_constant_columns,
  domain,          // a value left the interval I
  boundary_mean,   // delta_bar on the boundary of I, phi(delta_bar) not evaluated
  shape,           // convexity certification failed or contradicts a declaration
  non_uniform,     // hypergraph column sum != k
  isolated_vertex,
  infeasible,
  parse,
  internal,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `kind()` is stable, the message is
/// for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mpineq
