#include <cmath>
#include <numbers>

#include "mpineq/error.hpp"
#include "mpineq/measure_model.hpp"

namespace mpineq {

namespace {

// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (std::size_t k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
    p0 = p1;
    p1 = pk;
  }
  const double dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

QuadratureNodes gauss_legendre(std::size_t n) {
  QuadratureNodes out;
  out.nodes.resize(n);
  out.weights.resize(n);
  if (n == 1) {
    out.nodes[0] = 0.0;
    out.weights[0] = 2.0;
    return out;
  }
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      auto [p, d] = legendre(n, x);
      dp = d;
      const double step = p / d;
      x -= step;
      if (std::abs(step) <= 1e-16) break;
    }
    dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    out.nodes[i] = -x;
    out.nodes[n - 1 - i] = x;
    out.weights[i] = w;
    out.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) out.nodes[n / 2] = 0.0;
  return out;
}

}  // namespace

QuadratureNodes quadrature_nodes(const QuadratureScheme& scheme) {
  const std::size_t n = scheme.node_count;
  if (n == 0) throw Error(ErrorKind::invalid_argument, "quadrature needs at least one node");
  if (!std::isfinite(scheme.a) || !std::isfinite(scheme.b) || !(scheme.b > scheme.a)) {
    throw Error(ErrorKind::invalid_argument, "quadrature interval must be finite with a < b");
  }
  const double a = scheme.a;
  const double len = scheme.b - scheme.a;
  const double h = len / static_cast<double>(n);
  QuadratureNodes out;
  switch (scheme.rule) {
    case QuadratureRule::midpoint:
      for (std::size_t i = 0; i < n; ++i) {
        out.nodes.push_back(a + (static_cast<double>(i) + 0.5) * h);
        out.weights.push_back(h);
      }
      break;
    case QuadratureRule::trapezoid_periodic:
      for (std::size_t i = 0; i < n; ++i) {
        out.nodes.push_back(a + static_cast<double>(i) * h);
        out.weights.push_back(h);
      }
      break;
    case QuadratureRule::gauss_legendre: {
      out = gauss_legendre(n);
      for (std::size_t i = 0; i < n; ++i) {
        out.nodes[i] = a + 0.5 * len * (out.nodes[i] + 1.0);
        out.weights[i] *= 0.5 * len;
      }
      break;
    }
  }
  return out;
}

}  // namespace mpineq
