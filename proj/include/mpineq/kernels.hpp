#pragma once

// Dense kernel reductions shared by every check.
//
// `kernels::` holds the OpenMP versions used by the library. They split work
// by row (or column), keep one partial per row, and combine partials in index
// order, so the result does not depend on the thread count or schedule.
// `kernels::serial::` holds straightforward loops traversing the data in the
// opposite order; they are kept as the reference for tests and benchmarks.

#include <span>
#include <vector>

#include "mpineq/dense_matrix.hpp"

namespace mpineq::kernels {

/// c_e = sum_v M(v,e) mu_v
std::vector<double> column_mass_sums(const DenseMatrix& kernel, std::span<const double> v_masses);

/// delta_v = sum_e M(v,e) wt_e tau_e
std::vector<double> degrees(const DenseMatrix& kernel, std::span<const double> weights,
                            std::span<const double> e_masses);

/// sum_v x_v mu_v
double mass_weighted_sum(std::span<const double> values, std::span<const double> masses);

/// sum_v sum_e g_v M(v,e) wt_e mu_v tau_e, evaluated as a genuine double sum.
double double_sum(const DenseMatrix& kernel, std::span<const double> row_factor, std::span<const double> weights,
                  std::span<const double> v_masses, std::span<const double> e_masses);

/// Same with absolute values of g, M and wt (integrability hypotheses).
double double_sum_abs(const DenseMatrix& kernel, std::span<const double> row_factor,
                      std::span<const double> weights, std::span<const double> v_masses,
                      std::span<const double> e_masses);

namespace serial {

std::vector<double> column_mass_sums(const DenseMatrix& kernel, std::span<const double> v_masses);
std::vector<double> degrees(const DenseMatrix& kernel, std::span<const double> weights,
                            std::span<const double> e_masses);
double mass_weighted_sum(std::span<const double> values, std::span<const double> masses);
double double_sum(const DenseMatrix& kernel, std::span<const double> row_factor, std::span<const double> weights,
                  std::span<const double> v_masses, std::span<const double> e_masses);
double double_sum_abs(const DenseMatrix& kernel, std::span<const double> row_factor,
                      std::span<const double> weights, std::span<const double> v_masses,
                      std::span<const double> e_masses);

}  // namespace serial

/// Number of OpenMP threads the parallel kernels may use (1 without OpenMP).
int max_threads() noexcept;

}  // namespace mpineq::kernels
