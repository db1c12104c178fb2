#include "mpineq/measure_model.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "mpineq/error.hpp"
#include "mpineq/kernels.hpp"
#include "mpineq/random.hpp"

namespace mpineq {

namespace {

void require_masses(std::span<const double> masses, const char* which) {
  if (masses.empty()) {
    throw Error(ErrorKind::dimension_mismatch, std::string(which) + " space has no atoms");
  }
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!std::isfinite(masses[i])) {
      throw Error(ErrorKind::non_finite, std::string(which) + " mass " + std::to_string(i) + " is not finite");
    }
    if (!(masses[i] > 0.0)) {
      throw Error(ErrorKind::non_positive_mass,
                  std::string(which) + " mass " + std::to_string(i) + " is not strictly positive");
    }
  }
  const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
  if (!std::isfinite(total)) {
    throw Error(ErrorKind::non_finite, std::string(which) + " total mass is not finite");
  }
}

}  // namespace

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  DenseMatrix out(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) {
      throw Error(ErrorKind::dimension_mismatch, "kernel row " + std::to_string(i) + " has " +
                                                     std::to_string(rows[i].size()) + " entries, expected " +
                                                     std::to_string(c));
    }
    for (std::size_t j = 0; j < c; ++j) out(i, j) = rows[i][j];
  }
  return out;
}

double AtomicSpace::total_mass() const noexcept {
  return std::accumulate(masses.begin(), masses.end(), 0.0);
}

Instance::Instance(AtomicSpace v_space, AtomicSpace e_space, DenseMatrix kernel, std::vector<double> weights)
    : v_space_(std::move(v_space)),
      e_space_(std::move(e_space)),
      kernel_(std::move(kernel)),
      weights_(std::move(weights)) {
  require_masses(v_space_.masses, "v");
  require_masses(e_space_.masses, "e");
  if (!v_space_.labels.empty() && v_space_.labels.size() != v_space_.masses.size()) {
    throw Error(ErrorKind::dimension_mismatch, "v labels do not match atom count");
  }
  if (!e_space_.labels.empty() && e_space_.labels.size() != e_space_.masses.size()) {
    throw Error(ErrorKind::dimension_mismatch, "e labels do not match atom count");
  }
  if (kernel_.rows() != v_count() || kernel_.cols() != e_count()) {
    throw Error(ErrorKind::dimension_mismatch,
                "kernel is " + std::to_string(kernel_.rows()) + "x" + std::to_string(kernel_.cols()) +
                    ", expected " + std::to_string(v_count()) + "x" + std::to_string(e_count()));
  }
  if (weights_.size() != e_count()) {
    throw Error(ErrorKind::dimension_mismatch, "weights have " + std::to_string(weights_.size()) +
                                                   " entries, expected " + std::to_string(e_count()));
  }
  for (double x : kernel_.values()) {
    if (!std::isfinite(x)) throw Error(ErrorKind::non_finite, "kernel has a non-finite entry");
  }
  for (double x : weights_) {
    if (!std::isfinite(x)) throw Error(ErrorKind::non_finite, "weights have a non-finite entry");
  }
}

// -- sequences ---------------------------------------------------------------

SequenceModel::SequenceModel(std::vector<double> a, std::vector<double> b, std::vector<double> w)
    : a_(std::move(a)), b_(std::move(b)), w_(std::move(w)) {
  if (a_.empty()) throw Error(ErrorKind::invalid_argument, "truncation length must be at least 1");
  if (b_.size() != a_.size() || w_.size() != a_.size()) {
    throw Error(ErrorKind::dimension_mismatch, "sequences a, b, w must have equal length");
  }
  for (const auto* seq : {&a_, &b_, &w_}) {
    for (double x : *seq) {
      if (!std::isfinite(x)) throw Error(ErrorKind::non_finite, "sequence entry is not finite");
      if (!(x > 0.0)) throw Error(ErrorKind::non_positive_mass, "sequence entry is not strictly positive");
    }
  }
  u_.resize(a_.size());
  for (std::size_t j = 0; j < a_.size(); ++j) u_[j] = w_[j] * b_[j];
}

SequenceModel SequenceModel::from_u(std::vector<double> a, std::vector<double> u) {
  std::vector<double> ones(a.size(), 1.0);
  return SequenceModel(std::move(a), std::move(ones), std::move(u));
}

SequenceModel SequenceModel::generate(std::size_t n, const std::function<double(std::size_t)>& a,
                                      const std::function<double(std::size_t)>& b,
                                      const std::function<double(std::size_t)>& w, std::size_t lookahead) {
  std::vector<double> av(n), bv(n), wv(n);
  for (std::size_t i = 0; i < n; ++i) {
    av[i] = a(i);
    bv[i] = b(i);
    wv[i] = w(i);
  }
  SequenceModel model(std::move(av), std::move(bv), std::move(wv));
  double tail_a = 0.0;
  double tail_u = 0.0;
  for (std::size_t i = n; i < n + lookahead; ++i) {
    tail_a += a(i);
    tail_u += w(i) * b(i);
  }
  model.tail_a_ = tail_a;
  model.tail_u_ = tail_u;
  return model;
}

// -- constructors --------------------------------------------------------------

Instance build_discrete(std::vector<double> v_masses, std::vector<double> e_masses, DenseMatrix kernel,
                        std::vector<double> weights) {
  return Instance(AtomicSpace{std::move(v_masses), {}}, AtomicSpace{std::move(e_masses), {}}, std::move(kernel),
                  std::move(weights));
}

Instance from_sequences(const SequenceModel& model, const KernelRule& kernel_rule) {
  const std::size_t n = model.truncation_length();
  DenseMatrix kernel(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) kernel(i, j) = kernel_rule(i, j);
  }
  auto a = model.a();
  auto b = model.b();
  auto w = model.w();
  return build_discrete({a.begin(), a.end()}, {b.begin(), b.end()}, std::move(kernel), {w.begin(), w.end()});
}

KernelRule diagonal_kernel(const SequenceModel& model) {
  std::vector<double> a(model.a().begin(), model.a().end());
  return [a = std::move(a)](std::size_t i, std::size_t j) { return i == j ? 1.0 / a[i] : 0.0; };
}

Instance from_interval(const PointKernel& kernel_fn, const PointWeight& wt_fn, const QuadratureScheme& scheme_v,
                       const QuadratureScheme& scheme_e) {
  QuadratureNodes v = quadrature_nodes(scheme_v);
  QuadratureNodes e = quadrature_nodes(scheme_e);
  DenseMatrix kernel(v.nodes.size(), e.nodes.size());
  for (std::size_t i = 0; i < v.nodes.size(); ++i) {
    for (std::size_t j = 0; j < e.nodes.size(); ++j) {
      const double x = kernel_fn(v.nodes[i], e.nodes[j]);
      if (!std::isfinite(x)) {
        throw Error(ErrorKind::non_finite, "kernel function is not finite at node pair (" +
                                               std::to_string(v.nodes[i]) + ", " + std::to_string(e.nodes[j]) +
                                               ")");
      }
      kernel(i, j) = x;
    }
  }
  std::vector<double> weights(e.nodes.size());
  for (std::size_t j = 0; j < e.nodes.size(); ++j) {
    weights[j] = wt_fn(e.nodes[j]);
    if (!std::isfinite(weights[j])) {
      throw Error(ErrorKind::non_finite, "weight function is not finite at node " + std::to_string(e.nodes[j]));
    }
  }
  return build_discrete(std::move(v.weights), std::move(e.weights), std::move(kernel), std::move(weights));
}

Instance restrict_edges(const Instance& inst, const std::vector<bool>& erased) {
  if (erased.size() != inst.e_count()) {
    throw Error(ErrorKind::dimension_mismatch, "erasure mask has " + std::to_string(erased.size()) +
                                                   " entries, expected " + std::to_string(inst.e_count()));
  }
  std::vector<double> weights(inst.weights().begin(), inst.weights().end());
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (erased[j]) weights[j] = 0.0;
  }
  return Instance(inst.v_space(), inst.e_space(), inst.kernel(), std::move(weights));
}

// -- random instances --------------------------------------------------------

namespace {

constexpr int kColumnRetries = 64;

// Draws column j until its mass-weighted sum is positive, then rescales to c.
void draw_column(DenseMatrix& kernel, std::size_t j, std::span<const double> v_masses, double c, Rng& rng,
                 double zero_fraction) {
  for (int attempt = 0; attempt < kColumnRetries; ++attempt) {
    double sum = 0.0;
    for (std::size_t i = 0; i < kernel.rows(); ++i) {
      const double x = (zero_fraction > 0.0 && rng.coin(zero_fraction)) ? 0.0 : rng.uniform();
      kernel(i, j) = x;
      sum += x * v_masses[i];
    }
    if (sum > 0.0) {
      const double scale = c / sum;
      for (std::size_t i = 0; i < kernel.rows(); ++i) kernel(i, j) *= scale;
      return;
    }
  }
  throw Error(ErrorKind::infeasible, "could not draw a non-degenerate kernel column");
}

void require_generator_args(std::size_t p, std::size_t q, double c, WeightRange weights) {
  if (p == 0 || q == 0) throw Error(ErrorKind::invalid_argument, "p and q must be at least 1");
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorKind::invalid_argument, "c must be positive and finite");
  if (!(weights.lo > 0.0) || !(weights.hi >= weights.lo) || !std::isfinite(weights.hi)) {
    throw Error(ErrorKind::invalid_argument, "weight range must be a positive interval");
  }
}

}  // namespace

Instance random_instance(std::size_t p, std::size_t q, double c, std::uint64_t seed, WeightRange weights) {
  require_generator_args(p, q, c, weights);
  Rng rng(mix_seed(seed, 0x1157));
  std::vector<double> v_masses(p, 1.0);
  DenseMatrix kernel(p, q);
  for (std::size_t j = 0; j < q; ++j) draw_column(kernel, j, v_masses, c, rng, 0.0);
  std::vector<double> w(q);
  for (double& x : w) x = rng.uniform(weights.lo, weights.hi);
  return build_discrete(std::move(v_masses), std::vector<double>(q, 1.0), std::move(kernel), std::move(w));
}

Instance random_weighted_instance(std::size_t p, std::size_t q, double c, std::uint64_t seed, WeightRange weights,
                                  WeightRange masses, double zero_fraction) {
  require_generator_args(p, q, c, weights);
  if (!(masses.lo > 0.0) || !(masses.hi >= masses.lo)) {
    throw Error(ErrorKind::invalid_argument, "mass range must be a positive interval");
  }
  Rng rng(mix_seed(seed, 0x2157));
  std::vector<double> v_masses(p), e_masses(q);
  for (double& x : v_masses) x = rng.uniform(masses.lo, masses.hi);
  for (double& x : e_masses) x = rng.uniform(masses.lo, masses.hi);
  DenseMatrix kernel(p, q);
  for (std::size_t j = 0; j < q; ++j) draw_column(kernel, j, v_masses, c, rng, zero_fraction);
  std::vector<double> w(q);
  for (double& x : w) x = rng.uniform(weights.lo, weights.hi);
  return build_discrete(std::move(v_masses), std::move(e_masses), std::move(kernel), std::move(w));
}

}  // namespace mpineq
