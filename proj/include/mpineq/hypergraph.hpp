#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mpineq/inequalities.hpp"
#include "mpineq/measure_model.hpp"

namespace mpineq {

/// Edge-weighted hypergraph given by its vertex-edge incidence matrix of
/// multiplicities. Construction checks shape, nonnegativity and positive
/// weights; k-uniformity and isolated vertices are checked by
/// validate_and_degrees.
class Hypergraph {
 public:
  /// `incidence` is row-major p x q. Empty `edge_weights` means all 1.
  Hypergraph(std::int64_t k, std::size_t p, std::size_t q, std::vector<std::int64_t> incidence,
             std::vector<double> edge_weights = {});

  static Hypergraph from_rows(std::int64_t k, const std::vector<std::vector<std::int64_t>>& rows,
                              std::vector<double> edge_weights = {});

  std::int64_t k() const noexcept { return k_; }
  std::size_t vertex_count() const noexcept { return p_; }
  std::size_t edge_count() const noexcept { return q_; }
  std::int64_t multiplicity(std::size_t v, std::size_t e) const noexcept { return incidence_[v * q_ + e]; }
  std::span<const double> edge_weights() const noexcept { return weights_; }
  bool unit_weights() const noexcept;

  bool operator==(const Hypergraph&) const = default;

 private:
  std::int64_t k_;
  std::size_t p_;
  std::size_t q_;
  std::vector<std::int64_t> incidence_;
  std::vector<double> weights_;
};

struct DegreeSummary {
  std::vector<std::int64_t> degrees;
  std::vector<double> weighted_degrees;
  std::int64_t d_bar_num = 0;  // d_bar = kq/p in lowest terms
  std::int64_t d_bar_den = 1;
  double d_bar = 0.0;
  bool regular = false;
};

/// Throws Error(non_uniform) or Error(isolated_vertex).
DegreeSummary validate_and_degrees(const Hypergraph& h);

/// Counting measures on both sides, kernel = incidence, weights = edge weights.
Instance to_instance(const Hypergraph& h);

/// Geometric mean over edges of the edge geometric means of vertex degrees,
/// against the average degree. Requires unit weights.
CheckResult gm_of_gms_check(const Hypergraph& h, const Tolerance& tol = {});

/// Edges are k uniform draws with replacement; isolated vertices are repaired
/// by redrawing an edge through them. `regular` deals kq slots round-robin
/// and shuffles them, which needs p | kq (Error(infeasible) otherwise).
Hypergraph random_hypergraph(std::size_t p, std::size_t q, std::int64_t k, std::uint64_t seed, bool regular);

}  // namespace mpineq
