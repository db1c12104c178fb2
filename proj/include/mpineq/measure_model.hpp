#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpineq/dense_matrix.hpp"

namespace mpineq {

/// A finite measure space made of weighted atoms.
struct AtomicSpace {
  std::vector<double> masses;
  std::vector<std::string> labels;  // empty, or one per atom

  std::size_t atom_count() const noexcept { return masses.size(); }
  double total_mass() const noexcept;

  bool operator==(const AtomicSpace&) const = default;
};

/// A pair of atomic measure spaces (V, mu) and (E, tau) together with a
/// kernel M(v, e) and an edge weight wt(e). Immutable once built; every
/// constructor path validates positivity of masses and finiteness of all
/// entries. Constancy of the column integrals is NOT enforced here, see
/// `characterize`.
class Instance {
 public:
  Instance(AtomicSpace v_space, AtomicSpace e_space, DenseMatrix kernel, std::vector<double> weights);

  const AtomicSpace& v_space() const noexcept { return v_space_; }
  const AtomicSpace& e_space() const noexcept { return e_space_; }
  const DenseMatrix& kernel() const noexcept { return kernel_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> v_masses() const noexcept { return v_space_.masses; }
  std::span<const double> e_masses() const noexcept { return e_space_.masses; }

  std::size_t v_count() const noexcept { return v_space_.atom_count(); }
  std::size_t e_count() const noexcept { return e_space_.atom_count(); }

  bool operator==(const Instance&) const = default;

 private:
  AtomicSpace v_space_;
  AtomicSpace e_space_;
  DenseMatrix kernel_;
  std::vector<double> weights_;
};

enum class QuadratureRule { midpoint, trapezoid_periodic, gauss_legendre };

struct QuadratureScheme {
  QuadratureRule rule = QuadratureRule::gauss_legendre;
  std::size_t node_count = 16;
  double a = 0.0;
  double b = 1.0;
};

struct QuadratureNodes {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes in [a, b] and strictly positive weights summing to b - a.
/// trapezoid_periodic uses n equispaced nodes a + i h (b is identified with a).
QuadratureNodes quadrature_nodes(const QuadratureScheme& scheme);

/// Truncated weighted sequence spaces: mu = sum a_i, tau = sum b_j, wt = w_j,
/// with u_j = w_j b_j stored alongside.
class SequenceModel {
 public:
  SequenceModel(std::vector<double> a, std::vector<double> b, std::vector<double> w);

  /// b = 1, w = u.
  static SequenceModel from_u(std::vector<double> a, std::vector<double> u);

  /// Samples the first n terms of each generator. The next `lookahead` terms
  /// are summed into tail_mass_a / tail_mass_u; that is a report of what was
  /// cut off, not a bound on it.
  static SequenceModel generate(std::size_t n, const std::function<double(std::size_t)>& a,
                                const std::function<double(std::size_t)>& b,
                                const std::function<double(std::size_t)>& w, std::size_t lookahead = 1000);

  std::span<const double> a() const noexcept { return a_; }
  std::span<const double> b() const noexcept { return b_; }
  std::span<const double> w() const noexcept { return w_; }
  std::span<const double> u() const noexcept { return u_; }
  std::size_t truncation_length() const noexcept { return a_.size(); }

  std::optional<double> tail_mass_a() const noexcept { return tail_a_; }
  std::optional<double> tail_mass_u() const noexcept { return tail_u_; }

 private:
  std::vector<double> a_, b_, w_, u_;
  std::optional<double> tail_a_, tail_u_;
};

using KernelRule = std::function<double(std::size_t, std::size_t)>;
using PointKernel = std::function<double(double, double)>;
using PointWeight = std::function<double(double)>;

Instance build_discrete(std::vector<double> v_masses, std::vector<double> e_masses, DenseMatrix kernel,
                        std::vector<double> weights);

/// V = E = {0..n-1} with masses a and b, weights w.
Instance from_sequences(const SequenceModel& model, const KernelRule& kernel_rule);

/// m_ii = 1 / a_i, zero elsewhere. Column integrals are all 1.
KernelRule diagonal_kernel(const SequenceModel& model);

/// Atoms are quadrature nodes, masses are quadrature weights.
Instance from_interval(const PointKernel& kernel_fn, const PointWeight& wt_fn, const QuadratureScheme& scheme_v,
                       const QuadratureScheme& scheme_e);

/// Zeroes the weights of erased e-atoms; masses and kernel are untouched.
Instance restrict_edges(const Instance& inst, const std::vector<bool>& erased);

struct WeightRange {
  double lo = 0.5;
  double hi = 2.0;
};

/// Unit masses, nonnegative kernel with every column summing to c, weights
/// uniform in the range. Pure function of its arguments.
Instance random_instance(std::size_t p, std::size_t q, double c, std::uint64_t seed, WeightRange weights = {});

/// Like random_instance but with random masses in `masses` and a kernel whose
/// mass-weighted column sums are c. `zero_fraction` of kernel entries are
/// forced to zero.
Instance random_weighted_instance(std::size_t p, std::size_t q, double c, std::uint64_t seed, WeightRange weights,
                                  WeightRange masses, double zero_fraction = 0.0);

}  // namespace mpineq
