#include "mpineq/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "mpineq/error.hpp"
#include "mpineq/random.hpp"

namespace mpineq {

Hypergraph::Hypergraph(std::int64_t k, std::size_t p, std::size_t q, std::vector<std::int64_t> incidence,
                       std::vector<double> edge_weights)
    : k_(k), p_(p), q_(q), incidence_(std::move(incidence)), weights_(std::move(edge_weights)) {
  if (k_ < 1) throw Error(ErrorKind::invalid_argument, "k must be at least 1, got " + std::to_string(k_));
  if (p_ == 0 || q_ == 0) throw Error(ErrorKind::invalid_argument, "hypergraph needs at least one vertex and one edge");
  if (incidence_.size() != p_ * q_) {
    throw Error(ErrorKind::dimension_mismatch, "incidence has " + std::to_string(incidence_.size()) +
                                                   " entries, expected " + std::to_string(p_ * q_));
  }
  for (auto m : incidence_) {
    if (m < 0) throw Error(ErrorKind::invalid_argument, "negative multiplicity " + std::to_string(m));
  }
  if (weights_.empty()) weights_.assign(q_, 1.0);
  if (weights_.size() != q_) {
    throw Error(ErrorKind::dimension_mismatch, "edge_weights has " + std::to_string(weights_.size()) +
                                                   " entries, expected " + std::to_string(q_));
  }
  for (double w : weights_) {
    if (!std::isfinite(w) || !(w > 0.0)) {
      throw Error(ErrorKind::invalid_argument, "edge weights must be positive and finite");
    }
  }
}

Hypergraph Hypergraph::from_rows(std::int64_t k, const std::vector<std::vector<std::int64_t>>& rows,
                                 std::vector<double> edge_weights) {
  if (rows.empty()) throw Error(ErrorKind::invalid_argument, "hypergraph needs at least one vertex");
  const std::size_t q = rows.front().size();
  std::vector<std::int64_t> flat;
  flat.reserve(rows.size() * q);
  for (const auto& row : rows) {
    if (row.size() != q) throw Error(ErrorKind::dimension_mismatch, "incidence rows have different lengths");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return Hypergraph(k, rows.size(), q, std::move(flat), std::move(edge_weights));
}

bool Hypergraph::unit_weights() const noexcept {
  return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w == 1.0; });
}

DegreeSummary validate_and_degrees(const Hypergraph& h) {
  const std::size_t p = h.vertex_count();
  const std::size_t q = h.edge_count();
  for (std::size_t e = 0; e < q; ++e) {
    std::int64_t col = 0;
    for (std::size_t v = 0; v < p; ++v) col += h.multiplicity(v, e);
    if (col != h.k()) {
      throw Error(ErrorKind::non_uniform, "edge " + std::to_string(e) + " has total multiplicity " +
                                              std::to_string(col) + ", expected k=" + std::to_string(h.k()));
    }
  }
  DegreeSummary out;
  out.degrees.assign(p, 0);
  out.weighted_degrees.assign(p, 0.0);
  const auto wt = h.edge_weights();
  for (std::size_t v = 0; v < p; ++v) {
    for (std::size_t e = 0; e < q; ++e) {
      out.degrees[v] += h.multiplicity(v, e);
      out.weighted_degrees[v] += static_cast<double>(h.multiplicity(v, e)) * wt[e];
    }
    if (out.degrees[v] == 0) throw Error(ErrorKind::isolated_vertex, "vertex " + std::to_string(v) + " is isolated");
  }
  const std::int64_t num = h.k() * static_cast<std::int64_t>(q);
  const auto den = static_cast<std::int64_t>(p);
  const std::int64_t g = std::gcd(num, den);
  out.d_bar_num = num / g;
  out.d_bar_den = den / g;
  out.d_bar = static_cast<double>(out.d_bar_num) / static_cast<double>(out.d_bar_den);
  out.regular = std::adjacent_find(out.degrees.begin(), out.degrees.end(), std::not_equal_to<>()) ==
                out.degrees.end();
  return out;
}

Instance to_instance(const Hypergraph& h) {
  validate_and_degrees(h);
  const std::size_t p = h.vertex_count();
  const std::size_t q = h.edge_count();
  DenseMatrix kernel(p, q);
  for (std::size_t v = 0; v < p; ++v) {
    for (std::size_t e = 0; e < q; ++e) kernel(v, e) = static_cast<double>(h.multiplicity(v, e));
  }
  return build_discrete(std::vector<double>(p, 1.0), std::vector<double>(q, 1.0), std::move(kernel),
                        std::vector<double>(h.edge_weights().begin(), h.edge_weights().end()));
}

CheckResult gm_of_gms_check(const Hypergraph& h, const Tolerance& tol) {
  if (!h.unit_weights()) throw Error(ErrorKind::invalid_argument, "gm-of-gms needs unit edge weights");
  const DegreeSummary deg = validate_and_degrees(h);
  const std::size_t p = h.vertex_count();
  const std::size_t q = h.edge_count();
  std::vector<double> log_d(p);
  for (std::size_t v = 0; v < p; ++v) log_d[v] = std::log(static_cast<double>(deg.degrees[v]));

  double log_lhs = 0.0;
  for (std::size_t e = 0; e < q; ++e) {
    double edge = 0.0;
    for (std::size_t v = 0; v < p; ++v) edge += static_cast<double>(h.multiplicity(v, e)) * log_d[v];
    log_lhs += edge / static_cast<double>(h.k());
  }
  log_lhs /= static_cast<double>(q);
  const double log_rhs = std::log(deg.d_bar);

  CheckResult r;
  r.check_name = "gm-of-gms";
  r.phi = "log";
  r.lhs = std::exp(log_lhs);
  r.rhs = deg.d_bar;
  r.gap = r.lhs - r.rhs;
  r.delta_constant = deg.regular;
  r.note = "log_gap=" + std::to_string(log_lhs - log_rhs);
  finalize(r, tol);
  return r;
}

namespace {

// Forces vertex v onto some edge by replacing one slot of an edge whose
// removal keeps every other vertex covered.
bool repair_isolated(std::vector<std::vector<std::size_t>>& edges, std::vector<std::int64_t>& degree,
                     std::size_t v, Rng& rng) {
  const std::size_t q = edges.size();
  const std::size_t start = rng.index(q);
  for (std::size_t t = 0; t < q; ++t) {
    auto& edge = edges[(start + t) % q];
    const std::size_t k = edge.size();
    const std::size_t slot0 = rng.index(k);
    for (std::size_t u = 0; u < k; ++u) {
      const std::size_t slot = (slot0 + u) % k;
      if (degree[edge[slot]] >= 2) {
        --degree[edge[slot]];
        edge[slot] = v;
        ++degree[v];
        return true;
      }
    }
  }
  return false;
}

}  // namespace

Hypergraph random_hypergraph(std::size_t p, std::size_t q, std::int64_t k, std::uint64_t seed, bool regular) {
  if (p == 0 || q == 0 || k < 1) throw Error(ErrorKind::invalid_argument, "need p >= 1, q >= 1, k >= 1");
  const auto slots = static_cast<std::size_t>(k) * q;
  if (slots < p) {
    throw Error(ErrorKind::infeasible, "k q = " + std::to_string(slots) + " slots cannot cover " +
                                           std::to_string(p) + " vertices");
  }
  Rng rng(mix_seed(seed, 0x4e9));
  std::vector<std::vector<std::size_t>> edges(q, std::vector<std::size_t>(static_cast<std::size_t>(k)));
  std::vector<std::int64_t> degree(p, 0);

  if (regular) {
    if (slots % p != 0) {
      throw Error(ErrorKind::infeasible, "regular hypergraph needs p | k q, but k q / p = " +
                                             std::to_string(slots) + "/" + std::to_string(p));
    }
    std::vector<std::size_t> deck(slots);
    for (std::size_t i = 0; i < slots; ++i) deck[i] = i % p;
    shuffle(deck.begin(), deck.end(), rng);
    for (std::size_t i = 0; i < slots; ++i) {
      edges[i / static_cast<std::size_t>(k)][i % static_cast<std::size_t>(k)] = deck[i];
      ++degree[deck[i]];
    }
  } else {
    for (auto& edge : edges) {
      for (auto& slot : edge) {
        slot = rng.index(p);
        ++degree[slot];
      }
    }
    for (std::size_t v = 0; v < p; ++v) {
      if (degree[v] == 0 && !repair_isolated(edges, degree, v, rng)) {
        throw Error(ErrorKind::infeasible, "could not repair isolated vertex " + std::to_string(v));
      }
    }
  }

  std::vector<std::int64_t> incidence(p * q, 0);
  for (std::size_t e = 0; e < q; ++e) {
    for (std::size_t v : edges[e]) ++incidence[v * q + e];
  }
  return Hypergraph(k, p, q, std::move(incidence));
}

}  // namespace mpineq
