#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mpineq {

/// Real interval with independently open/closed, possibly infinite ends.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
  static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
  static Interval real_line() { return {}; }
  static Interval positive() { return {0.0, std::numeric_limits<double>::infinity(), false, false}; }
  static Interval nonnegative() { return {0.0, std::numeric_limits<double>::infinity(), true, false}; }

  bool contains(double x) const noexcept;
  bool contains_interior(double x) const noexcept;
  bool contains(const Interval& other) const noexcept;
  Interval intersect(const Interval& other) const noexcept;
  std::string to_string() const;

  bool operator==(const Interval&) const = default;
};

enum class PhiFamily { log, power, identity, tabulated };

enum class Shape { convex, strictly_convex, concave, strictly_concave, unknown };

std::string_view to_string(Shape shape);
bool is_convex(Shape shape) noexcept;   // convex or strictly_convex
bool is_concave(Shape shape) noexcept;  // concave or strictly_concave
bool is_strict(Shape shape) noexcept;

/// The function phi, its derived f(t) = t phi(t), and the interval I on
/// which both are used. `log` and `power` come with closed-form f''.
class PhiSpec {
 public:
  static PhiSpec log();
  static PhiSpec identity();            // phi(t) = t, f(t) = t^2
  static PhiSpec power(double exponent);  // phi(t) = t^r, f(t) = t^(r+1)
  /// Linear interpolation between (t_i, phi_i); domain is [t_0, t_n].
  static PhiSpec tabulated(std::vector<double> t, std::vector<double> phi, Shape declared = Shape::unknown);

  /// "log", "id", "pow:<r>". Throws Error(parse).
  static PhiSpec parse(std::string_view text);

  /// Restricts I. Throws Error(domain) unless `domain` lies inside the
  /// natural domain of the family.
  PhiSpec with_domain(const Interval& domain) const;

  PhiFamily family() const noexcept { return family_; }
  double exponent() const noexcept { return exponent_; }
  const Interval& domain() const noexcept { return domain_; }
  Shape declared_shape() const noexcept { return declared_; }
  bool analytic() const noexcept { return family_ != PhiFamily::tabulated; }
  const std::string& label() const noexcept { return label_; }

  /// Throws Error(domain) outside I.
  double phi(double t) const;
  double f(double t) const { return t * phi(t); }
  /// Closed-form f''; nullopt for tabulated phi.
  std::optional<double> f_second(double t) const;

 private:
  PhiSpec() = default;

  PhiFamily family_ = PhiFamily::identity;
  double exponent_ = 1.0;
  Interval domain_;
  Shape declared_ = Shape::unknown;
  std::string label_;
  std::vector<double> table_t_;
  std::vector<double> table_phi_;
};

struct ShapeCertificate {
  Shape shape = Shape::unknown;
  std::vector<double> grid;
  double min_f_second = 0.0;
  double max_f_second = 0.0;
  double tolerance = 0.0;
  bool closed_form = false;
  bool degenerate = false;  // m == M
};

/// Absolute tolerance on finite-difference f'' for a convex/concave verdict.
inline constexpr double kShapeTolerance = 1e-9;

/// Classifies f on [m, M]. Analytic families use the closed-form f'' (exact);
/// tabulated phi falls back to finite differences and reports its declared
/// shape only when the differences do not contradict it.
ShapeCertificate certify_shape(const PhiSpec& phi, double m, double M, std::size_t grid_size = 64);

/// Always central finite differences of f with step equal to the grid spacing.
ShapeCertificate certify_shape_fd(const PhiSpec& phi, double m, double M, std::size_t grid_size = 64);

/// Infimum of f'' over [m, M] (exact for analytic families, grid minimum
/// otherwise), clamped at 0. Throws Error(shape) if f is not convex there.
double estimate_alpha(const PhiSpec& phi, double m, double M, std::size_t grid_size = 64);

}  // namespace mpineq
