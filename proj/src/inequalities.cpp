#include "mpineq/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "mpineq/error.hpp"
#include "mpineq/kernels.hpp"
#include "mpineq/random.hpp"

namespace mpineq {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// (1/s) sum_{v,e} g(v) M wt mu tau and its absolute counterpart.
struct DoubleSum {
  double value = 0.0;
  double abs_scale = 0.0;
};

DoubleSum normalized_double_sum(const Instance& inst, const std::vector<double>& g, double norm) {
  const auto& k = inst.kernel();
  DoubleSum out;
  out.value = kernels::double_sum(k, g, inst.weights(), inst.v_masses(), inst.e_masses()) / norm;
  out.abs_scale =
      kernels::double_sum_abs(k, g, inst.weights(), inst.v_masses(), inst.e_masses()) / std::abs(norm);
  return out;
}

bool identity_agrees(double a, double b, double scale) {
  const double ref = std::max({std::abs(a), std::abs(b), scale});
  return std::abs(a - b) <= kIdentityTolerance * ref || a == b;
}

void require_in_domain(const DegreeProfile& profile, const PhiSpec& phi) {
  for (std::size_t v = 0; v < profile.delta.size(); ++v) {
    if (!phi.domain().contains(profile.delta[v])) {
      throw Error(ErrorKind::domain, "(v) fails: delta_" + std::to_string(v) + " = " + num(profile.delta[v]) +
                                         " not in I=" + phi.domain().to_string());
    }
  }
  if (!phi.domain().contains_interior(profile.delta_bar)) {
    throw Error(ErrorKind::boundary_mean, "delta_bar = " + num(profile.delta_bar) +
                                              " is not strictly inside I=" + phi.domain().to_string() +
                                              ", phi(delta_bar) not evaluated");
  }
}

void require_positive_delta(const DegreeProfile& profile, const char* what) {
  for (std::size_t v = 0; v < profile.delta.size(); ++v) {
    if (!(profile.delta[v] > 0.0)) {
      throw Error(ErrorKind::domain, std::string(what) + " needs delta > 0, but delta_" + std::to_string(v) +
                                         " = " + num(profile.delta[v]));
    }
  }
}

void require_nonnegative_delta(const DegreeProfile& profile, const char* what) {
  for (std::size_t v = 0; v < profile.delta.size(); ++v) {
    if (profile.delta[v] < 0.0) {
      throw Error(ErrorKind::domain, std::string(what) + " needs delta >= 0, but delta_" + std::to_string(v) +
                                         " = " + num(profile.delta[v]));
    }
  }
}

void require_matching(const Instance& inst, const DegreeProfile& profile) {
  if (profile.delta.size() != inst.v_count()) {
    throw Error(ErrorKind::dimension_mismatch, "degree profile does not belong to this instance");
  }
}

// The Jensen-type comparison shared by the main inequality, the concave
// reversal and the stability refinement.
CheckResult jensen_core(const Instance& inst, const DegreeProfile& profile, const PhiSpec& phi,
                        Relation relation, const char* name) {
  require_matching(inst, profile);
  require_in_domain(profile, phi);

  std::vector<double> g(profile.delta.size());
  std::vector<double> f(profile.delta.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    g[v] = phi.phi(profile.delta[v]);
    f[v] = profile.delta[v] * g[v];
  }
  const DoubleSum lhs = normalized_double_sum(inst, g, profile.s);
  if (!std::isfinite(lhs.value) || !std::isfinite(lhs.abs_scale)) {
    throw Error(ErrorKind::non_finite, "(vi) fails: phi(delta) M wt is not summable");
  }

  CheckResult r;
  r.check_name = name;
  r.phi = phi.label();
  r.relation = relation;
  r.lhs = lhs.value;
  r.lhs_identity = kernels::mass_weighted_sum(f, profile.v_masses) / profile.s;
  r.identity_ok = identity_agrees(r.lhs, *r.lhs_identity, lhs.abs_scale);
  r.rhs = profile.c * phi.phi(profile.delta_bar);
  r.gap = r.lhs - r.rhs;
  r.delta_constant = profile.is_constant();
  return r;
}

}  // namespace

std::string_view to_string(Status status) {
  switch (status) {
    case Status::holds: return "holds";
    case Status::violated: return "violated";
    case Status::equality: return "equality";
  }
  return "unknown";
}

double Tolerance::effective(double lhs, double rhs) const noexcept {
  return abs + rel * std::max(std::abs(lhs), std::abs(rhs));
}

void finalize(CheckResult& r, const Tolerance& tol) {
  r.tol = tol.effective(r.lhs, r.rhs);
  const bool violated = !(r.relation == Relation::at_least ? r.gap >= -r.tol : r.gap <= r.tol);
  r.equality_flag = !violated && std::abs(r.gap) <= tol.eq;
  r.status = violated ? Status::violated : (r.equality_flag ? Status::equality : Status::holds);
  if (!r.identity_ok) {
    r.status = Status::violated;
    r.equality_flag = false;
    if (!r.note.empty()) r.note += "; ";
    r.note += "double sum and key identity disagree: " + num(r.lhs) + " vs " + num(r.lhs_identity.value_or(NAN));
  }
}

CheckResult main_inequality(const Instance& inst, const DegreeProfile& profile, const PhiSpec& phi,
                            const Tolerance& tol) {
  require_matching(inst, profile);
  require_in_domain(profile, phi);
  const ShapeCertificate cert = certify_shape(phi, profile.min_delta(), profile.max_delta());
  if (!is_convex(cert.shape) && !cert.degenerate) {
    throw Error(ErrorKind::shape, "f = t phi(t) is " + std::string(to_string(cert.shape)) +
                                      " on the delta range, main inequality needs convex");
  }
  CheckResult r = jensen_core(inst, profile, phi, Relation::at_least, "main");
  finalize(r, tol);
  return r;
}

StabilityParams stability_params(const DegreeProfile& profile, const PhiSpec& phi,
                                 std::optional<std::pair<double, double>> range) {
  StabilityParams out;
  out.m = range ? range->first : profile.min_delta();
  out.M = range ? range->second : profile.max_delta();
  if (out.m > profile.min_delta() || out.M < profile.max_delta()) {
    throw Error(ErrorKind::invalid_argument, "stability range [" + num(out.m) + ", " + num(out.M) +
                                                 "] does not cover the delta range");
  }
  out.alpha = estimate_alpha(phi, out.m, out.M);
  double ss = 0.0;
  for (std::size_t v = 0; v < profile.delta.size(); ++v) {
    const double d = profile.delta[v] - profile.delta_bar;
    ss += d * d * profile.v_masses[v];
  }
  out.variance_term = out.alpha / (2.0 * profile.s) * ss;
  return out;
}

CheckResult stability_check(const Instance& inst, const DegreeProfile& profile, const PhiSpec& phi,
                            const StabilityParams& params, const Tolerance& tol) {
  if (params.m > profile.min_delta() || params.M < profile.max_delta()) {
    throw Error(ErrorKind::invalid_argument, "stability range does not cover the delta range");
  }
  if (!(params.alpha >= 0.0)) throw Error(ErrorKind::shape, "alpha unavailable");
  CheckResult r = jensen_core(inst, profile, phi, Relation::at_least, "stability");
  r.bound = r.rhs + params.variance_term;
  r.gap = r.lhs - *r.bound;
  r.note = "alpha=" + num(params.alpha) + " variance_term=" + num(params.variance_term);
  finalize(r, tol);
  return r;
}

CheckResult concave_reversal(const Instance& inst, const DegreeProfile& profile, const PhiSpec& phi,
                             const Tolerance& tol) {
  require_matching(inst, profile);
  require_in_domain(profile, phi);
  const ShapeCertificate cert = certify_shape(phi, profile.min_delta(), profile.max_delta());
  if (!is_concave(cert.shape) && !cert.degenerate) {
    throw Error(ErrorKind::shape, "shape not concave: f = t phi(t) is " + std::string(to_string(cert.shape)) +
                                      " on the delta range");
  }
  CheckResult r = jensen_core(inst, profile, phi, Relation::at_most, "concave-reversal");
  finalize(r, tol);
  return r;
}

CheckResult variational_scan(const DegreeProfile& profile, const PhiSpec& phi, std::size_t trials,
                             std::uint64_t seed, const Tolerance& tol) {
  require_in_domain(profile, phi);
  const double lo0 = std::min(profile.min_delta(), profile.delta_bar);
  const double hi0 = std::max(profile.max_delta(), profile.delta_bar);
  if (lo0 < hi0 && certify_shape(phi, lo0, hi0).shape != Shape::strictly_convex) {
    throw Error(ErrorKind::shape, "variational scan needs f strictly convex on the delta range");
  }

  const auto& mu = profile.v_masses;
  const std::size_t p = profile.delta.size();
  auto functional = [&](const std::vector<double>& x) {
    double acc = 0.0;
    for (std::size_t v = 0; v < p; ++v) acc += phi.f(x[v]) * mu[v];
    return acc / profile.s;
  };

  const std::vector<double> flat(p, profile.delta_bar);
  CheckResult r;
  r.check_name = "variational";
  r.phi = phi.label();
  r.lhs = functional(profile.delta);
  r.rhs = functional(flat);
  r.gap = r.lhs - r.rhs;
  r.delta_constant = profile.is_constant();

  Rng rng(mix_seed(seed, 0x7a5));
  const double step_scale = 0.2 * (profile.delta_bar != 0.0 ? std::abs(profile.delta_bar) : 1.0);
  const double strict_spread = 1e-9 * std::max(1.0, std::abs(profile.delta_bar));
  double min_trial = std::numeric_limits<double>::infinity();
  double lo = lo0;
  double hi = hi0;
  std::size_t nonstrict = 0;
  if (p >= 2) {
    std::vector<double> x(p);
    for (std::size_t t = 0; t < trials; ++t) {
      std::fill(x.begin(), x.end(), profile.delta_bar);
      const std::size_t moves = 1 + rng.index(2 * p);
      std::size_t done = 0;
      std::size_t rejected = 0;
      while (done < moves) {
        const std::size_t i = rng.index(p);
        std::size_t j = rng.index(p - 1);
        if (j >= i) ++j;
        // mass transfer between two atoms; each value moves by at most step_scale
        const double step = step_scale * (1.0 - rng.uniform());
        const double mass = step * std::min(mu[i], mu[j]);
        const double xi = x[i] + mass / mu[i];
        const double xj = x[j] - mass / mu[j];
        if (!phi.domain().contains(xi) || !phi.domain().contains(xj)) {
          if (++rejected > 1000 * moves) {
            throw Error(ErrorKind::domain, "perturbation cannot stay inside I=" + phi.domain().to_string());
          }
          continue;
        }
        x[i] = xi;
        x[j] = xj;
        ++done;
      }
      double mass_sum = 0.0;
      for (std::size_t v = 0; v < p; ++v) mass_sum += x[v] * mu[v];
      const double shift = profile.delta_bar - mass_sum / profile.mu_total;
      bool shifted_inside = true;
      for (double xv : x) shifted_inside = shifted_inside && phi.domain().contains(xv + shift);
      if (shifted_inside) {
        for (double& xv : x) xv += shift;
      }
      const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
      lo = std::min(lo, *mn);
      hi = std::max(hi, *mx);
      const double value = functional(x);
      min_trial = std::min(min_trial, value);
      if (*mx - *mn > strict_spread && !(value > r.rhs)) ++nonstrict;
    }
    if (certify_shape(phi, lo, hi).shape != Shape::strictly_convex) {
      throw Error(ErrorKind::shape, "variational scan left the strictly convex range of f");
    }
  }
  if (std::isfinite(min_trial)) r.bound = min_trial;
  r.note = "trials=" + std::to_string(p >= 2 ? trials : 0) + " nonstrict=" + std::to_string(nonstrict);
  finalize(r, tol);
  if ((r.bound && *r.bound < r.rhs - r.tol) || nonstrict > 0) {
    r.status = Status::violated;
    r.equality_flag = false;
    r.note += "; a trial profile did not exceed F(delta_bar)";
  }
  return r;
}

std::vector<CheckResult> power_mean_chain(const Instance& inst, const DegreeProfile& profile,
                                          std::span<const double> exponents, PowerMeanVariant variant,
                                          const Tolerance& tol) {
  require_matching(inst, profile);
  if (exponents.size() < 2) throw Error(ErrorKind::invalid_argument, "power-mean chain needs two exponents");
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (!(exponents[i] > 0.0) || !std::isfinite(exponents[i])) {
      throw Error(ErrorKind::invalid_argument, "power-mean exponents must be positive");
    }
    if (i > 0 && !(exponents[i] > exponents[i - 1])) {
      throw Error(ErrorKind::invalid_argument, "power-mean exponents must be strictly ascending");
    }
  }
  require_nonnegative_delta(profile, "power mean");
  const bool normalized = variant == PowerMeanVariant::normalized;
  if (normalized && !(profile.c > 0.0)) {
    throw Error(ErrorKind::domain, "normalized power mean needs c > 0");
  }

  struct Moment {
    double value, identity, scale;
  };
  std::vector<Moment> moments;
  for (double r : exponents) {
    std::vector<double> g(profile.delta.size());
    std::vector<double> f(profile.delta.size());
    for (std::size_t v = 0; v < g.size(); ++v) {
      g[v] = std::pow(profile.delta[v], r);
      f[v] = std::pow(profile.delta[v], r + 1.0);
    }
    const DoubleSum b = normalized_double_sum(inst, g, profile.s);
    moments.push_back({b.value, kernels::mass_weighted_sum(f, profile.v_masses) / profile.s, b.abs_scale});
  }
  auto root = [&](double b, double r) { return std::pow(normalized ? b / profile.c : b, 1.0 / r); };

  std::vector<CheckResult> out;
  const std::string base = normalized ? "power-mean" : "power-mean:paper-literal";
  for (std::size_t i = 0; i + 1 < exponents.size(); ++i) {
    const double q = exponents[i];
    const double p = exponents[i + 1];
    CheckResult r;
    r.check_name = base + "[" + short_num(q) + "->" + short_num(p) + "]";
    r.asserted = normalized;
    r.lhs = root(moments[i + 1].value, p);
    r.rhs = root(moments[i].value, q);
    r.gap = r.lhs - r.rhs;
    r.lhs_identity = root(moments[i + 1].identity, p);
    r.identity_ok = identity_agrees(moments[i].value, moments[i].identity, moments[i].scale) &&
                    identity_agrees(moments[i + 1].value, moments[i + 1].identity, moments[i + 1].scale);
    r.delta_constant = profile.is_constant();
    finalize(r, tol);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckResult> marginal_power_mean(const Instance& inst, const DegreeProfile& profile, double p,
                                             const Tolerance& tol) {
  require_matching(inst, profile);
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorKind::invalid_argument, "marginal power mean needs p >= 1");
  require_nonnegative_delta(profile, "power mean");

  std::vector<double> pw(profile.delta.size());
  std::vector<double> pw1(profile.delta.size());
  for (std::size_t v = 0; v < pw.size(); ++v) {
    pw[v] = std::pow(profile.delta[v], p);
    pw1[v] = std::pow(profile.delta[v], p - 1.0);
  }
  const double moment = kernels::mass_weighted_sum(pw, profile.v_masses);

  CheckResult marginal;
  marginal.check_name = "marginal-power-mean[p=" + short_num(p) + "]";
  marginal.lhs = std::pow(moment / profile.mu_total, 1.0 / p);
  marginal.rhs = profile.delta_bar;
  marginal.gap = marginal.lhs - marginal.rhs;
  marginal.delta_constant = profile.is_constant();
  finalize(marginal, tol);

  CheckResult product;
  product.check_name = "marginal-power-mean:product[p=" + short_num(p) + "]";
  const DoubleSum ds = normalized_double_sum(inst, pw1, profile.s);
  product.lhs = ds.value;
  product.lhs_identity = moment / profile.s;
  product.identity_ok = identity_agrees(product.lhs, *product.lhs_identity, ds.abs_scale);
  product.rhs = profile.c * std::pow(profile.delta_bar, p - 1.0);
  product.gap = product.lhs - product.rhs;
  product.delta_constant = profile.is_constant();
  finalize(product, tol);
  return {marginal, product};
}

CheckResult entropy_check(const Instance& inst, const DegreeProfile& profile, const Tolerance& tol) {
  require_matching(inst, profile);
  require_positive_delta(profile, "entropy");
  const double cs = profile.c * profile.s;
  if (!(cs > 0.0)) throw Error(ErrorKind::domain, "entropy needs c s > 0");

  std::vector<double> g(profile.delta.size());
  std::vector<double> f(profile.delta.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    g[v] = std::log(profile.delta[v] / profile.delta_bar);
    f[v] = profile.delta[v] * g[v];
  }
  const DoubleSum ds = normalized_double_sum(inst, g, cs);

  CheckResult r;
  r.check_name = "entropy";
  r.relation = Relation::at_most;
  r.lhs = -ds.value;
  r.lhs_identity = -kernels::mass_weighted_sum(f, profile.v_masses) / cs;
  r.identity_ok = identity_agrees(r.lhs, *r.lhs_identity, ds.abs_scale);
  r.rhs = 0.0;
  r.gap = r.lhs;
  r.delta_constant = profile.is_constant();
  finalize(r, tol);
  return r;
}

CheckResult erasure_check(const Instance& inst, const std::vector<bool>& erased, const PhiSpec& phi,
                          const Tolerance& tol, double column_tol) {
  const Instance restricted = restrict_edges(inst, erased);
  const DegreeProfile prof = characterize(restricted, column_tol);
  CheckResult r = main_inequality(restricted, prof, phi, tol);
  r.check_name = "erasure";

  // Normalization by the tau-mass of the kept atoms, reported for comparison only.
  double kept_mass = 0.0;
  for (std::size_t j = 0; j < erased.size(); ++j) {
    if (!erased[j]) kept_mass += inst.e_masses()[j];
  }
  const double kept_mean = kept_mass * prof.s / prof.mu_total;
  std::string kept_rhs = "undefined";
  if (phi.domain().contains_interior(kept_mean)) kept_rhs = num(kept_mass * phi.phi(kept_mean));
  r.note = "s_E0=" + num(prof.s) + " delta_bar_E0=" + num(prof.delta_bar) + "; kept-mass normalization: c_kept=" +
           num(kept_mass) + " delta_bar_kept=" + num(kept_mean) + " rhs_kept=" + kept_rhs;
  return r;
}

CheckResult geometric_mean_check(const Instance& inst, const DegreeProfile& profile, const Tolerance& tol,
                                 GeometricVariant variant) {
  require_matching(inst, profile);
  require_positive_delta(profile, "geometric mean");
  const bool normalized = variant == GeometricVariant::normalized;
  const double norm = normalized ? profile.c * profile.s : profile.s;
  if (!(norm > 0.0)) throw Error(ErrorKind::domain, "geometric mean needs c s > 0");

  std::vector<double> g(profile.delta.size());
  std::vector<double> f(profile.delta.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    g[v] = std::log(profile.delta[v]);
    f[v] = profile.delta[v] * g[v];
  }
  const DoubleSum ds = normalized_double_sum(inst, g, norm);
  const double log_identity = kernels::mass_weighted_sum(f, profile.v_masses) / norm;

  CheckResult r;
  r.check_name = normalized ? "geometric-mean" : "geometric-mean:paper-literal";
  r.asserted = normalized;
  r.lhs = std::exp(ds.value);
  r.lhs_identity = std::exp(log_identity);
  r.identity_ok = identity_agrees(ds.value, log_identity, ds.abs_scale);
  r.rhs = profile.delta_bar;
  r.gap = r.lhs - r.rhs;
  r.delta_constant = profile.is_constant();
  finalize(r, tol);
  return r;
}

std::pair<CheckResult, CheckResult> sequence_inequalities(const SequenceModel& model, const PhiSpec& phi,
                                                          const Tolerance& tol) {
  const auto a = model.a();
  const auto u = model.u();
  const std::size_t n = a.size();
  double s = 0.0;
  double total_a = 0.0;
  std::vector<double> ratio(n);
  for (std::size_t i = 0; i < n; ++i) {
    s += u[i];
    total_a += a[i];
    ratio[i] = u[i] / a[i];
  }
  const auto [rmin, rmax] = std::minmax_element(ratio.begin(), ratio.end());
  const bool constant_ratio = *rmax - *rmin <= 1e-12 * std::abs(*rmax);

  // phi-dependent form: diagonal kernel m_ii = 1 / a_i.
  for (double x : ratio) {
    if (!phi.domain().contains(x)) {
      throw Error(ErrorKind::domain, "u_i / a_i = " + num(x) + " not in I=" + phi.domain().to_string());
    }
  }
  const double mean = s / total_a;
  if (!phi.domain().contains_interior(mean)) {
    throw Error(ErrorKind::boundary_mean, "s / sum a = " + num(mean) + " not strictly inside I");
  }
  const ShapeCertificate cert = certify_shape(phi, *rmin, *rmax);
  if (!is_convex(cert.shape) && !cert.degenerate) {
    throw Error(ErrorKind::shape, "f = t phi(t) is not convex on the ratio range");
  }
  CheckResult first;
  first.check_name = "sequence[diagonal]";
  first.phi = phi.label();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += phi.phi(ratio[i]) * u[i];
  first.lhs = acc / s;
  first.rhs = phi.phi(mean);
  first.gap = first.lhs - first.rhs;
  first.delta_constant = constant_ratio;
  {
    // The same quantity as a double sum over the diagonal instance.
    const Instance inst = from_sequences(model, diagonal_kernel(model));
    const DegreeProfile prof = characterize(inst);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = phi.phi(prof.delta[i]);
    const DoubleSum ds = normalized_double_sum(inst, g, prof.s);
    first.lhs_identity = ds.value;
    first.identity_ok = identity_agrees(first.lhs, ds.value, ds.abs_scale);
  }
  finalize(first, tol);

  // Logarithm of prod (u_i/a_i)^{u_i} >= (sum u / sum a)^{sum u}.
  CheckResult second;
  second.check_name = "sequence[product]";
  second.phi = "log";
  double lhs = 0.0;
  double abs_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double term = u[i] * std::log(ratio[i]);
    lhs += term;
    abs_sum += std::abs(term);
  }
  if (!std::isfinite(abs_sum)) throw Error(ErrorKind::non_finite, "sum u_i |ln(u_i/a_i)| is not finite");
  second.lhs = lhs;
  second.rhs = s * std::log(mean);
  second.gap = second.lhs - second.rhs;
  second.delta_constant = constant_ratio;
  finalize(second, tol);
  return {first, second};
}

}  // namespace mpineq
