#include "mpineq/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mpineq::kernels {

namespace {

// Below this many kernel entries the loops stay on the calling thread.
constexpr std::int64_t kParallelThreshold = 1 << 14;

double combine(const std::vector<double>& partials) {
  double total = 0.0;
  for (double x : partials) total += x;
  return total;
}

template <bool Abs>
double double_sum_impl(const DenseMatrix& kernel, std::span<const double> g, std::span<const double> wt,
                       std::span<const double> mu, std::span<const double> tau) {
  const auto rows = static_cast<std::int64_t>(kernel.rows());
  const std::size_t cols = kernel.cols();
  std::vector<double> partials(kernel.rows(), 0.0);
  const bool big = rows * static_cast<std::int64_t>(cols) > kParallelThreshold;
#pragma omp parallel for schedule(static) if (big)
  for (std::int64_t v = 0; v < rows; ++v) {
    const auto row = kernel.row(static_cast<std::size_t>(v));
    const double gm = (Abs ? std::abs(g[v]) : g[v]) * mu[v];
    double acc = 0.0;
    // one integrand term g(v) M(v,e) wt(e) mu_v tau_e per product atom
    for (std::size_t e = 0; e < cols; ++e) {
      if constexpr (Abs) {
        acc += gm * std::abs(row[e]) * std::abs(wt[e]) * tau[e];
      } else {
        acc += gm * row[e] * wt[e] * tau[e];
      }
    }
    partials[static_cast<std::size_t>(v)] = acc;
  }
  return combine(partials);
}

template <bool Abs>
double serial_double_sum_impl(const DenseMatrix& kernel, std::span<const double> g, std::span<const double> wt,
                              std::span<const double> mu, std::span<const double> tau) {
  // Edge-major order: sum over e of wt_e tau_e (sum over v of g_v M mu_v).
  double total = 0.0;
  for (std::size_t e = 0; e < kernel.cols(); ++e) {
    double inner = 0.0;
    for (std::size_t v = 0; v < kernel.rows(); ++v) {
      if constexpr (Abs) {
        inner += std::abs(g[v]) * std::abs(kernel(v, e)) * mu[v];
      } else {
        inner += g[v] * kernel(v, e) * mu[v];
      }
    }
    total += (Abs ? std::abs(wt[e]) : wt[e]) * tau[e] * inner;
  }
  return total;
}

}  // namespace

std::vector<double> column_mass_sums(const DenseMatrix& kernel, std::span<const double> v_masses) {
  // Column tiles keep row-major access; each column still sums rows in order.
  constexpr std::size_t kTile = 64;
  const std::size_t cols = kernel.cols();
  const std::size_t rows = kernel.rows();
  std::vector<double> sums(cols, 0.0);
  const auto tiles = static_cast<std::int64_t>((cols + kTile - 1) / kTile);
  const bool big = static_cast<std::int64_t>(cols * rows) > kParallelThreshold;
#pragma omp parallel for schedule(static) if (big)
  for (std::int64_t t = 0; t < tiles; ++t) {
    const std::size_t lo = static_cast<std::size_t>(t) * kTile;
    const std::size_t hi = std::min(cols, lo + kTile);
    for (std::size_t v = 0; v < rows; ++v) {
      const auto row = kernel.row(v);
      for (std::size_t e = lo; e < hi; ++e) sums[e] += row[e] * v_masses[v];
    }
  }
  return sums;
}

std::vector<double> degrees(const DenseMatrix& kernel, std::span<const double> weights,
                            std::span<const double> e_masses) {
  const auto rows = static_cast<std::int64_t>(kernel.rows());
  const std::size_t cols = kernel.cols();
  std::vector<double> delta(kernel.rows(), 0.0);
  const bool big = rows * static_cast<std::int64_t>(cols) > kParallelThreshold;
#pragma omp parallel for schedule(static) if (big)
  for (std::int64_t v = 0; v < rows; ++v) {
    const auto row = kernel.row(static_cast<std::size_t>(v));
    double acc = 0.0;
    for (std::size_t e = 0; e < cols; ++e) acc += row[e] * weights[e] * e_masses[e];
    delta[static_cast<std::size_t>(v)] = acc;
  }
  return delta;
}

double mass_weighted_sum(std::span<const double> values, std::span<const double> masses) {
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) total += values[i] * masses[i];
  return total;
}

double double_sum(const DenseMatrix& kernel, std::span<const double> row_factor, std::span<const double> weights,
                  std::span<const double> v_masses, std::span<const double> e_masses) {
  return double_sum_impl<false>(kernel, row_factor, weights, v_masses, e_masses);
}

double double_sum_abs(const DenseMatrix& kernel, std::span<const double> row_factor,
                      std::span<const double> weights, std::span<const double> v_masses,
                      std::span<const double> e_masses) {
  return double_sum_impl<true>(kernel, row_factor, weights, v_masses, e_masses);
}

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace serial {

std::vector<double> column_mass_sums(const DenseMatrix& kernel, std::span<const double> v_masses) {
  std::vector<double> sums(kernel.cols(), 0.0);
  for (std::size_t v = 0; v < kernel.rows(); ++v) {
    const auto row = kernel.row(v);
    for (std::size_t e = 0; e < kernel.cols(); ++e) sums[e] += row[e] * v_masses[v];
  }
  return sums;
}

std::vector<double> degrees(const DenseMatrix& kernel, std::span<const double> weights,
                            std::span<const double> e_masses) {
  std::vector<double> delta(kernel.rows(), 0.0);
  for (std::size_t e = 0; e < kernel.cols(); ++e) {
    const double we = weights[e] * e_masses[e];
    for (std::size_t v = 0; v < kernel.rows(); ++v) delta[v] += kernel(v, e) * we;
  }
  return delta;
}

double mass_weighted_sum(std::span<const double> values, std::span<const double> masses) {
  double total = 0.0;
  for (std::size_t i = values.size(); i-- > 0;) total += values[i] * masses[i];
  return total;
}

double double_sum(const DenseMatrix& kernel, std::span<const double> row_factor, std::span<const double> weights,
                  std::span<const double> v_masses, std::span<const double> e_masses) {
  return serial_double_sum_impl<false>(kernel, row_factor, weights, v_masses, e_masses);
}

double double_sum_abs(const DenseMatrix& kernel, std::span<const double> row_factor,
                      std::span<const double> weights, std::span<const double> v_masses,
                      std::span<const double> e_masses) {
  return serial_double_sum_impl<true>(kernel, row_factor, weights, v_masses, e_masses);
}

}  // namespace serial

}  // namespace mpineq::kernels
