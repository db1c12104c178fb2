#include "mpineq/degree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "mpineq/error.hpp"
#include "mpineq/kernels.hpp"

namespace mpineq {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct ColumnCheck {
  double c = 0.0;
  double max_deviation = 0.0;
  std::size_t worst = 0;
  bool constant = true;
};

ColumnCheck check_columns(const std::vector<double>& cols, double column_tol) {
  ColumnCheck out;
  out.c = cols.front();
  const double threshold = out.c != 0.0 ? column_tol * std::abs(out.c) : column_tol;
  for (std::size_t e = 0; e < cols.size(); ++e) {
    const double dev = std::abs(cols[e] - out.c);
    if (dev > out.max_deviation || std::isnan(dev)) {
      out.max_deviation = dev;
      out.worst = e;
    }
  }
  out.constant = out.max_deviation <= threshold;
  return out;
}

}  // namespace

double DegreeProfile::min_delta() const { return *std::min_element(delta.begin(), delta.end()); }
double DegreeProfile::max_delta() const { return *std::max_element(delta.begin(), delta.end()); }

bool DegreeProfile::is_constant(double rel) const { return spread() <= rel * std::abs(delta_bar); }

DegreeProfile characterize(const Instance& inst, double column_tol) {
  const auto wt = inst.weights();
  const auto mu = inst.v_masses();
  const auto tau = inst.e_masses();

  DegreeProfile out;
  out.s = kernels::mass_weighted_sum(wt, tau);
  if (!std::isfinite(out.s)) throw Error(ErrorKind::non_finite, "weight mass s is not finite");
  if (!(out.s > 0.0)) {
    throw Error(ErrorKind::zero_weight_mass, "zero weight mass: s = " + num(out.s) + " (need s > 0)");
  }

  const std::vector<double> cols = kernels::column_mass_sums(inst.kernel(), mu);
  const ColumnCheck cc = check_columns(cols, column_tol);
  if (!cc.constant) {
    throw Error(ErrorKind::non_constant_columns,
                "column integrals non-constant: c_0 = " + num(cc.c) + " but c_" + std::to_string(cc.worst) +
                    " = " + num(cols[cc.worst]));
  }
  out.c = cc.c;
  out.max_column_deviation = cc.max_deviation;

  out.delta = kernels::degrees(inst.kernel(), wt, tau);
  for (double d : out.delta) {
    if (!std::isfinite(d)) throw Error(ErrorKind::non_finite, "degree delta(v) is not finite");
  }
  out.v_masses.assign(mu.begin(), mu.end());
  out.mu_total = inst.v_space().total_mass();

  const double delta_mass = kernels::mass_weighted_sum(out.delta, mu);
  out.delta_bar = delta_mass / out.mu_total;
  out.delta_bar_identity = out.c * out.s / out.mu_total;

  // Fubini on atoms: sum_v delta_v mu_v == sum_e c_e wt_e tau_e.
  const double swapped = kernels::mass_weighted_sum(
      [&] {
        std::vector<double> t(cols.size());
        for (std::size_t e = 0; e < cols.size(); ++e) t[e] = cols[e] * wt[e];
        return t;
      }(),
      tau);
  const std::vector<double> ones(inst.v_count(), 1.0);
  const double scale = kernels::double_sum_abs(inst.kernel(), ones, wt, mu, tau);
  if (std::abs(swapped - delta_mass) > 1e-10 * std::max(scale, std::numeric_limits<double>::min())) {
    throw Error(ErrorKind::internal, "order-of-summation identity failed: " + num(delta_mass) + " vs " + num(swapped));
  }

  const bool nonnegative = std::all_of(out.delta.begin(), out.delta.end(), [](double d) { return d >= 0.0; });
  if (out.c * out.s > 0.0 && nonnegative && delta_mass > 0.0) {
    std::vector<double> rho(out.delta.size());
    for (std::size_t v = 0; v < rho.size(); ++v) rho[v] = out.delta[v] * mu[v] / delta_mass;
    out.rho = std::move(rho);
  }
  return out;
}

bool HypothesisReport::all_passed() const noexcept {
  return std::all_of(entries.begin(), entries.end(), [](const HypothesisEntry& e) { return e.passed; });
}

std::string HypothesisReport::first_failure() const {
  for (const auto& e : entries) {
    if (!e.passed) return "(" + e.id + ") " + e.description + (e.note.empty() ? "" : ": " + e.note);
  }
  return {};
}

HypothesisReport check_hypotheses(const Instance& inst, const PhiSpec& phi, double column_tol) {
  const auto wt = inst.weights();
  const auto mu = inst.v_masses();
  const auto tau = inst.e_masses();
  HypothesisReport rep;

  auto& h1 = rep.entries[0];
  h1 = {"i", "0 < mu(V) < inf", false, inst.v_space().total_mass(), {}};
  h1.passed = h1.quantity > 0.0 && std::isfinite(h1.quantity);

  auto& h2 = rep.entries[1];
  h2 = {"ii", "0 < s < inf", false, kernels::mass_weighted_sum(wt, tau), {}};
  h2.passed = h2.quantity > 0.0 && std::isfinite(h2.quantity);
  if (!h2.passed) h2.note = "s = " + num(h2.quantity);

  const std::vector<double> ones(inst.v_count(), 1.0);
  auto& h3 = rep.entries[2];
  h3 = {"iii", "sum |M| |wt| mu tau < inf", false, kernels::double_sum_abs(inst.kernel(), ones, wt, mu, tau), {}};
  h3.passed = std::isfinite(h3.quantity);

  const std::vector<double> cols = kernels::column_mass_sums(inst.kernel(), mu);
  const ColumnCheck cc = check_columns(cols, column_tol);
  auto& h4 = rep.entries[3];
  h4 = {"iv", "constant column integral c", cc.constant, cc.max_deviation, "c = " + num(cc.c)};
  if (!cc.constant) h4.note += ", column " + std::to_string(cc.worst) + " gives " + num(cols[cc.worst]);

  const std::vector<double> delta = kernels::degrees(inst.kernel(), wt, tau);
  auto& h5 = rep.entries[4];
  h5 = {"v", "delta(v) in I", true, 0.0, {}};
  for (std::size_t v = 0; v < delta.size(); ++v) {
    if (!phi.domain().contains(delta[v])) {
      if (h5.passed) {
        h5.note = "delta_" + std::to_string(v) + " = " + num(delta[v]) + " not in I=" + phi.domain().to_string();
      }
      h5.passed = false;
      h5.quantity += 1.0;  // atoms outside I
    }
  }

  auto& h6 = rep.entries[5];
  h6 = {"vi", "sum |phi(delta)| |M| |wt| mu tau < inf", false, 0.0, {}};
  if (h5.passed) {
    std::vector<double> g(delta.size());
    for (std::size_t v = 0; v < delta.size(); ++v) g[v] = phi.phi(delta[v]);
    h6.quantity = kernels::double_sum_abs(inst.kernel(), g, wt, mu, tau);
    h6.passed = std::isfinite(h6.quantity);
  } else {
    h6.quantity = std::numeric_limits<double>::quiet_NaN();
    h6.note = "phi(delta) undefined where (v) fails";
  }
  return rep;
}

}  // namespace mpineq
