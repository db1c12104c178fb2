#include "mpineq/convexity.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "mpineq/error.hpp"

namespace mpineq {

namespace {

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

Interval natural_power_domain(double r) {
  if (r < 0.0) return Interval::positive();
  if (is_integer(r)) return Interval::real_line();
  return Interval::nonnegative();
}

Shape classify_fd(double min_fpp, double max_fpp, double tol) {
  if (min_fpp > tol) return Shape::strictly_convex;
  if (max_fpp < -tol) return Shape::strictly_concave;
  if (min_fpp >= -tol) return Shape::convex;   // includes affine f
  if (max_fpp <= tol) return Shape::concave;
  return Shape::unknown;
}

}  // namespace

// -- Interval ----------------------------------------------------------------

bool Interval::contains(double x) const noexcept {
  if (std::isnan(x)) return false;
  const bool above = lo_closed ? x >= lo : x > lo;
  const bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

bool Interval::contains_interior(double x) const noexcept {
  return !std::isnan(x) && x > lo && x < hi;
}

bool Interval::contains(const Interval& other) const noexcept {
  const bool lo_ok = other.lo > lo || (other.lo == lo && (lo_closed || !other.lo_closed));
  const bool hi_ok = other.hi < hi || (other.hi == hi && (hi_closed || !other.hi_closed));
  return lo_ok && hi_ok;
}

Interval Interval::intersect(const Interval& other) const noexcept {
  Interval out = *this;
  if (other.lo > lo || (other.lo == lo && !other.lo_closed)) {
    out.lo = other.lo;
    out.lo_closed = other.lo_closed;
  }
  if (other.hi < hi || (other.hi == hi && !other.hi_closed)) {
    out.hi = other.hi;
    out.hi_closed = other.hi_closed;
  }
  return out;
}

std::string Interval::to_string() const {
  return std::string(lo_closed ? "[" : "(") + format_number(lo) + ", " + format_number(hi) + (hi_closed ? "]" : ")");
}

// -- Shape -------------------------------------------------------------------

std::string_view to_string(Shape shape) {
  switch (shape) {
    case Shape::convex: return "convex";
    case Shape::strictly_convex: return "strictly-convex";
    case Shape::concave: return "concave";
    case Shape::strictly_concave: return "strictly-concave";
    case Shape::unknown: return "unknown";
  }
  return "unknown";
}

bool is_convex(Shape shape) noexcept { return shape == Shape::convex || shape == Shape::strictly_convex; }
bool is_concave(Shape shape) noexcept { return shape == Shape::concave || shape == Shape::strictly_concave; }
bool is_strict(Shape shape) noexcept {
  return shape == Shape::strictly_convex || shape == Shape::strictly_concave;
}

// -- PhiSpec -----------------------------------------------------------------

PhiSpec PhiSpec::log() {
  PhiSpec p;
  p.family_ = PhiFamily::log;
  p.domain_ = Interval::positive();
  p.label_ = "log";
  return p;
}

PhiSpec PhiSpec::identity() {
  PhiSpec p;
  p.family_ = PhiFamily::identity;
  p.domain_ = Interval::real_line();
  p.label_ = "id";
  return p;
}

PhiSpec PhiSpec::power(double exponent) {
  if (!std::isfinite(exponent)) throw Error(ErrorKind::invalid_argument, "power exponent must be finite");
  PhiSpec p;
  p.family_ = PhiFamily::power;
  p.exponent_ = exponent;
  p.domain_ = natural_power_domain(exponent);
  p.label_ = "pow:" + format_number(exponent);
  return p;
}

PhiSpec PhiSpec::tabulated(std::vector<double> t, std::vector<double> phi, Shape declared) {
  if (t.size() < 2 || t.size() != phi.size()) {
    throw Error(ErrorKind::invalid_argument, "tabulated phi needs at least two (t, phi) pairs");
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(phi[i])) {
      throw Error(ErrorKind::non_finite, "tabulated phi has a non-finite entry");
    }
    if (i > 0 && !(t[i] > t[i - 1])) {
      throw Error(ErrorKind::invalid_argument, "tabulated abscissae must be strictly increasing");
    }
  }
  PhiSpec p;
  p.family_ = PhiFamily::tabulated;
  p.domain_ = Interval::closed(t.front(), t.back());
  p.declared_ = declared;
  p.label_ = "table";
  p.table_t_ = std::move(t);
  p.table_phi_ = std::move(phi);
  return p;
}

PhiSpec PhiSpec::parse(std::string_view text) {
  if (text == "log") return log();
  if (text == "id") return identity();
  if (text.starts_with("pow:")) {
    const std::string_view num = text.substr(4);
    double r = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), r);
    if (num.empty() || ec != std::errc{} || ptr != num.data() + num.size() || !std::isfinite(r)) {
      throw Error(ErrorKind::parse, "bad power exponent in phi spec '" + std::string(text) + "'");
    }
    PhiSpec p = power(r);
    p.label_ = std::string(text);
    return p;
  }
  throw Error(ErrorKind::parse, "unknown phi spec '" + std::string(text) + "' (expected log, id or pow:<r>)");
}

PhiSpec PhiSpec::with_domain(const Interval& domain) const {
  Interval natural = domain_;
  if (family_ == PhiFamily::log) natural = Interval::positive();
  if (family_ == PhiFamily::identity) natural = Interval::real_line();
  if (family_ == PhiFamily::power) natural = natural_power_domain(exponent_);
  if (family_ == PhiFamily::tabulated) natural = Interval::closed(table_t_.front(), table_t_.back());
  if (!natural.contains(domain)) {
    throw Error(ErrorKind::domain, "interval " + domain.to_string() + " is not inside the domain " +
                                       natural.to_string() + " of phi=" + label_);
  }
  PhiSpec p = *this;
  p.domain_ = domain;
  return p;
}

double PhiSpec::phi(double t) const {
  if (!domain_.contains(t)) {
    throw Error(ErrorKind::domain,
                "phi=" + label_ + " evaluated at " + format_number(t) + " outside I=" + domain_.to_string());
  }
  switch (family_) {
    case PhiFamily::log: return std::log(t);
    case PhiFamily::identity: return t;
    case PhiFamily::power: return std::pow(t, exponent_);
    case PhiFamily::tabulated: {
      const auto it = std::upper_bound(table_t_.begin(), table_t_.end(), t);
      if (it == table_t_.end()) return table_phi_.back();
      const auto i = static_cast<std::size_t>(it - table_t_.begin());
      if (i == 0) return table_phi_.front();
      const double x0 = table_t_[i - 1];
      const double x1 = table_t_[i];
      const double w = (t - x0) / (x1 - x0);
      return table_phi_[i - 1] + w * (table_phi_[i] - table_phi_[i - 1]);
    }
  }
  return 0.0;
}

std::optional<double> PhiSpec::f_second(double t) const {
  switch (family_) {
    case PhiFamily::log: return 1.0 / t;
    case PhiFamily::identity: return 2.0;
    case PhiFamily::power: {
      const double coef = (exponent_ + 1.0) * exponent_;
      if (coef == 0.0) return 0.0;
      return coef * std::pow(t, exponent_ - 1.0);
    }
    case PhiFamily::tabulated: return std::nullopt;
  }
  return std::nullopt;
}

// -- certification -----------------------------------------------------------

namespace {

void require_range(const PhiSpec& phi, double m, double M, std::size_t grid_size) {
  if (!std::isfinite(m) || !std::isfinite(M) || m > M) {
    throw Error(ErrorKind::invalid_argument, "certification range must be finite with m <= M");
  }
  if (grid_size < 3) throw Error(ErrorKind::invalid_argument, "grid_size must be at least 3");
  if (!phi.domain().contains(m) || !phi.domain().contains(M)) {
    throw Error(ErrorKind::domain, "range [" + format_number(m) + ", " + format_number(M) + "] exits I=" +
                                       phi.domain().to_string() + " of phi=" + phi.label());
  }
}

}  // namespace

ShapeCertificate certify_shape_fd(const PhiSpec& phi, double m, double M, std::size_t grid_size) {
  require_range(phi, m, M, grid_size);
  ShapeCertificate cert;
  cert.tolerance = kShapeTolerance;
  if (m == M) {
    cert.shape = Shape::convex;
    cert.degenerate = true;
    cert.grid = {m};
    return cert;
  }
  const double h = (M - m) / static_cast<double>(grid_size - 1);
  cert.grid.resize(grid_size);
  std::vector<double> fv(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    cert.grid[i] = i + 1 == grid_size ? M : m + static_cast<double>(i) * h;
    fv[i] = phi.f(cert.grid[i]);
  }
  cert.min_f_second = std::numeric_limits<double>::infinity();
  cert.max_f_second = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < grid_size; ++i) {
    const double d2 = (fv[i - 1] - 2.0 * fv[i] + fv[i + 1]) / (h * h);
    cert.min_f_second = std::min(cert.min_f_second, d2);
    cert.max_f_second = std::max(cert.max_f_second, d2);
  }
  cert.shape = classify_fd(cert.min_f_second, cert.max_f_second, cert.tolerance);
  return cert;
}

ShapeCertificate certify_shape(const PhiSpec& phi, double m, double M, std::size_t grid_size) {
  require_range(phi, m, M, grid_size);
  if (!phi.analytic()) {
    ShapeCertificate cert = certify_shape_fd(phi, m, M, grid_size);
    if (cert.degenerate) return cert;
    const Shape declared = phi.declared_shape();
    if (is_convex(declared) && cert.min_f_second < -cert.tolerance) {
      throw Error(ErrorKind::shape, "declared convex, but finite differences of f reach " +
                                        format_number(cert.min_f_second));
    }
    if (is_concave(declared) && cert.max_f_second > cert.tolerance) {
      throw Error(ErrorKind::shape, "declared concave, but finite differences of f reach " +
                                        format_number(cert.max_f_second));
    }
    cert.shape = declared;
    return cert;
  }

  ShapeCertificate cert;
  cert.closed_form = true;
  cert.tolerance = 0.0;
  if (m == M) {
    cert.shape = Shape::convex;
    cert.degenerate = true;
    cert.grid = {m};
    cert.min_f_second = cert.max_f_second = *phi.f_second(m);
    return cert;
  }
  // f'' is c t^n (or 1/t, or constant): extremes sit at the endpoints or at 0.
  cert.grid = {m, M};
  if (m < 0.0 && M > 0.0) cert.grid.push_back(0.0);
  cert.min_f_second = std::numeric_limits<double>::infinity();
  cert.max_f_second = -std::numeric_limits<double>::infinity();
  for (double t : cert.grid) {
    const double v = *phi.f_second(t);
    cert.min_f_second = std::min(cert.min_f_second, v);
    cert.max_f_second = std::max(cert.max_f_second, v);
  }
  if (cert.min_f_second == 0.0 && cert.max_f_second == 0.0) {
    cert.shape = Shape::convex;  // affine or constant f
  } else if (cert.min_f_second >= 0.0) {
    // zeros of c t^n are isolated
    cert.shape = Shape::strictly_convex;
  } else if (cert.max_f_second <= 0.0) {
    cert.shape = Shape::strictly_concave;
  } else {
    cert.shape = Shape::unknown;
  }
  return cert;
}

double estimate_alpha(const PhiSpec& phi, double m, double M, std::size_t grid_size) {
  const ShapeCertificate cert = certify_shape(phi, m, M, grid_size);
  if (!is_convex(cert.shape)) {
    throw Error(ErrorKind::shape, "f is " + std::string(to_string(cert.shape)) + " on [" + format_number(m) +
                                      ", " + format_number(M) + "], no convexity constant");
  }
  return std::max(0.0, cert.min_f_second);
}

}  // namespace mpineq
