#include "mpineq/fuzz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

#include "mpineq/error.hpp"
#include "mpineq/io.hpp"
#include "mpineq/kernels.hpp"
#include "mpineq/random.hpp"

namespace mpineq {

namespace {

constexpr std::size_t kMaxShrinkSteps = 256;

std::string instance_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fuzz-%06zu", index);
  return buf;
}

double round_sig3(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return std::strtod(buf, nullptr);
}

std::vector<double> column_sums(const DenseMatrix& k, std::span<const double> mu) {
  return kernels::serial::column_mass_sums(k, mu);
}

// Rescales each column to integrate to c; nullopt if a column vanishes.
std::optional<DenseMatrix> renormalize(DenseMatrix k, std::span<const double> mu, double c) {
  const std::vector<double> sums = column_sums(k, mu);
  for (std::size_t e = 0; e < k.cols(); ++e) {
    if (c == 0.0) continue;
    if (!(sums[e] != 0.0) || !std::isfinite(sums[e])) return std::nullopt;
    const double scale = c / sums[e];
    for (std::size_t v = 0; v < k.rows(); ++v) k(v, e) *= scale;
  }
  return k;
}

std::optional<Instance> try_build(std::vector<double> mu, std::vector<double> tau, DenseMatrix k,
                                  std::vector<double> wt) {
  try {
    return build_discrete(std::move(mu), std::move(tau), std::move(k), std::move(wt));
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<Instance> drop_v(const Instance& inst, std::size_t drop, double c) {
  const std::size_t p = inst.v_count();
  const std::size_t q = inst.e_count();
  if (p < 2) return std::nullopt;
  std::vector<double> mu;
  DenseMatrix k(p - 1, q);
  for (std::size_t v = 0, r = 0; v < p; ++v) {
    if (v == drop) continue;
    mu.push_back(inst.v_masses()[v]);
    for (std::size_t e = 0; e < q; ++e) k(r, e) = inst.kernel()(v, e);
    ++r;
  }
  auto renorm = renormalize(std::move(k), mu, c);
  if (!renorm) return std::nullopt;
  return try_build(std::move(mu), {inst.e_masses().begin(), inst.e_masses().end()}, std::move(*renorm),
                   {inst.weights().begin(), inst.weights().end()});
}

std::optional<Instance> drop_e(const Instance& inst, std::size_t drop) {
  const std::size_t p = inst.v_count();
  const std::size_t q = inst.e_count();
  if (q < 2) return std::nullopt;
  std::vector<double> tau;
  std::vector<double> wt;
  DenseMatrix k(p, q - 1);
  for (std::size_t e = 0, col = 0; e < q; ++e) {
    if (e == drop) continue;
    tau.push_back(inst.e_masses()[e]);
    wt.push_back(inst.weights()[e]);
    for (std::size_t v = 0; v < p; ++v) k(v, col) = inst.kernel()(v, e);
    ++col;
  }
  return try_build({inst.v_masses().begin(), inst.v_masses().end()}, std::move(tau), std::move(k), std::move(wt));
}

std::vector<double> rounded(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v = round_sig3(v);
  return out;
}

// The check family a result row belongs to, as a SuiteConfig check name.
std::string family_of(const std::string& row_name) {
  const auto bracket = row_name.find('[');
  std::string base = row_name.substr(0, bracket);
  if (base == "marginal-power-mean:product") base = "marginal-power-mean";
  return base;
}

std::vector<bool> random_mask(std::size_t q, Rng& rng) {
  std::vector<bool> mask(q);
  for (std::size_t e = 0; e < q; ++e) mask[e] = rng.coin(0.5);
  mask[rng.index(q)] = false;
  return mask;
}

struct InstanceOutcome {
  InstanceBlock block;
  std::vector<ReportRow> rows;
  std::vector<FuzzViolation> violations;
};

InstanceOutcome evaluate(const SuiteConfig& base, std::size_t index) {
  InstanceOutcome out;
  Source src = random_source(base.seed, index);
  out.block.instance_id = src.id;
  out.block.kind = src.kind;
  out.block.p = src.instance.v_count();
  out.block.q = src.instance.e_count();

  SuiteConfig cfg = base;
  Rng rng(mix_seed(base.seed, 0xf00d0000ULL + index));
  cfg.erase_mask = random_mask(src.instance.e_count(), rng);
  cfg.seed = mix_seed(base.seed, index);

  SuiteReport report;
  try {
    report = run_checks(src, cfg);
  } catch (const Error& e) {
    out.block.error = e.what();
    return out;
  }
  out.block.rows = report.rows.size();
  out.block.skipped = report.skipped.size();

  for (const auto& row : report.rows) {
    if (!row.result.violated()) continue;
    ++out.block.violations;
    const std::string family = family_of(row.result.check_name);
    // Erasure is the main inequality on the restricted instance, which keeps
    // the mask attached to the atoms while shrinking.
    const bool erasure = family == "erasure";
    Source replay{src.id, SourceKind::file, erasure ? restrict_edges(src.instance, *cfg.erase_mask) : src.instance,
                  src.domain, std::nullopt, std::nullopt};
    SuiteConfig one = cfg;
    one.checks = {erasure ? std::string("main") : family};
    if (row.result.phi != "-") one.phi_list = {row.result.phi};
    const std::string target = erasure ? std::string("main") : row.result.check_name;
    const std::string phi = row.result.phi;
    auto still_fails = [&](const Instance& candidate) {
      try {
        Source s = replay;
        s.instance = candidate;
        s.domain = replay.domain;
        const SuiteReport r = run_checks(s, one);
        return std::any_of(r.rows.begin(), r.rows.end(), [&](const ReportRow& rr) {
          return rr.result.check_name == target && rr.result.phi == phi && rr.result.violated();
        });
      } catch (const Error&) {
        return false;
      }
    };
    FuzzViolation v{src.id, src.kind, row.result, replay.instance, replay.instance};
    // Sequence and hypergraph checks need their source structure; those are
    // reported unshrunk.
    if (still_fails(replay.instance)) v.shrunk = shrink(replay.instance, still_fails);
    out.violations.push_back(std::move(v));
  }
  out.rows = std::move(report.rows);
  return out;
}

}  // namespace

Source random_source(std::uint64_t seed, std::size_t index) {
  const std::uint64_t s = mix_seed(seed, index);
  Rng rng(mix_seed(s, 0x5ce));
  const std::string id = instance_name(index);
  char spec[160];
  switch (index % 4) {
    case 0: {
      const std::size_t p = 1 + rng.index(6);
      const std::size_t q = 1 + rng.index(6);
      const double c = rng.uniform(0.25, 3.0);
      Source out{id, SourceKind::matrix, random_instance(1, 1, 1.0, s), std::nullopt, std::nullopt, std::nullopt};
      if (rng.coin(0.5)) {
        out.instance = random_instance(p, q, c, s, {rng.uniform(0.1, 1.0), rng.uniform(1.0, 4.0)});
      } else {
        const double zero_fraction = rng.coin(0.5) ? 0.3 : 0.0;
        out.instance = random_weighted_instance(p, q, c, s, {0.1, 3.0}, {0.2, 2.0}, zero_fraction);
      }
      return out;
    }
    case 1: {
      const std::size_t p = 2 + rng.index(6);
      const std::size_t k = 2 + rng.index(3);
      const std::size_t q = (p + k - 1) / k + rng.index(5);
      const bool regular = (k * q) % p == 0 && rng.coin(0.5);
      std::snprintf(spec, sizeof spec, "hypergraph:p=%zu,q=%zu,k=%zu,regular=%d", p, q, k, regular ? 1 : 0);
      break;
    }
    case 2: {
      const std::size_t n = 2 + rng.index(19);
      std::snprintf(spec, sizeof spec, "sequence:n=%zu,ratio_a=%.3f,ratio_u=%.3f", n, rng.uniform(0.2, 0.9),
                    rng.uniform(0.2, 0.9));
      break;
    }
    default: {
      static const char* rules[] = {"gl", "midpoint", "trapezoid"};
      const std::size_t nodes = 4 + rng.index(21);
      const char* rule = rules[rng.index(3)];
      // Gauss-Legendre on the e-axis needs no periodicity, any node count works.
      std::snprintf(spec, sizeof spec, "interval:nodes=%zu,rule=%s,amp=%.3f", nodes, rule, rng.uniform(-0.9, 0.9));
      break;
    }
  }
  return generate_source(spec, s, id);
}

Instance shrink(const Instance& inst, const std::function<bool(const Instance&)>& still_fails) {
  Instance cur = inst;
  const std::vector<double> cols = column_sums(cur.kernel(), cur.v_masses());
  const double c = cols.empty() ? 0.0 : cols.front();

  std::size_t steps = 0;
  bool progress = true;
  while (progress && steps < kMaxShrinkSteps) {
    progress = false;
    for (std::size_t v = cur.v_count(); v-- > 0 && !progress;) {
      if (auto cand = drop_v(cur, v, c); cand && still_fails(*cand)) {
        cur = std::move(*cand);
        progress = true;
      }
    }
    for (std::size_t e = cur.e_count(); e-- > 0 && !progress;) {
      if (auto cand = drop_e(cur, e); cand && still_fails(*cand)) {
        cur = std::move(*cand);
        progress = true;
      }
    }
    ++steps;
  }

  // Weights and e-masses do not affect the column integrals.
  if (auto cand = try_build({cur.v_masses().begin(), cur.v_masses().end()}, rounded(cur.e_masses()), cur.kernel(),
                            rounded(cur.weights()));
      cand && still_fails(*cand)) {
    cur = std::move(*cand);
  }
  // Kernel and v-masses are rounded, then columns are rescaled back to c.
  DenseMatrix k = cur.kernel();
  for (std::size_t v = 0; v < k.rows(); ++v) {
    for (std::size_t e = 0; e < k.cols(); ++e) k(v, e) = round_sig3(k(v, e));
  }
  const std::vector<double> mu = rounded(cur.v_masses());
  if (auto renorm = renormalize(std::move(k), mu, round_sig3(c))) {
    if (auto cand = try_build(mu, {cur.e_masses().begin(), cur.e_masses().end()}, std::move(*renorm),
                              {cur.weights().begin(), cur.weights().end()});
        cand && still_fails(*cand)) {
      cur = std::move(*cand);
    }
  }
  return cur;
}

std::size_t FuzzReport::asserted_violations() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [](const FuzzViolation& v) { return v.result.asserted; }));
}

std::size_t FuzzReport::informational_violations() const noexcept {
  return violations.size() - asserted_violations();
}

std::string FuzzReport::to_csv() const {
  std::string out = io::csv_header() + "\n";
  for (const auto& v : violations) out += io::csv_row(v.instance_id, v.result) + "\n";
  return out;
}

nlohmann::json FuzzReport::to_json() const {
  using nlohmann::json;
  json j;
  j["seed"] = seed;
  j["instances_tried"] = instances_tried;
  j["rows_evaluated"] = rows_evaluated;
  j["identity_failures"] = identity_failures;
  j["asserted_violations"] = asserted_violations();
  j["informational_violations"] = informational_violations();
  json tally = json::object();
  for (const auto& [key, t] : tallies) {
    tally[key] = {{"runs", t.runs}, {"violations", t.violations}, {"worst_margin", io::format_double(t.worst_margin)}};
  }
  j["tallies"] = std::move(tally);
  j["blocks"] = json::array();
  for (const auto& b : blocks) {
    json jb = {{"instance_id", b.instance_id}, {"kind", std::string(to_string(b.kind))}, {"p", b.p}, {"q", b.q},
               {"rows", b.rows}, {"skipped", b.skipped}, {"violations", b.violations}};
    if (!b.error.empty()) jb["error"] = b.error;
    j["blocks"].push_back(std::move(jb));
  }
  j["violations"] = json::array();
  for (const auto& v : violations) {
    json jv = io::to_json(v.result);
    jv["instance_id"] = v.instance_id;
    jv["kind"] = std::string(to_string(v.kind));
    jv["original"] = io::to_json(v.original);
    jv["shrunk"] = io::to_json(v.shrunk);
    j["violations"].push_back(std::move(jv));
  }
  return j;
}

FuzzReport fuzz(const SuiteConfig& config, std::size_t count) {
  config.validate();
  if (count < 1) throw Error(ErrorKind::invalid_argument, "fuzz count must be at least 1");
  std::vector<InstanceOutcome> outcomes(count);
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 4)
  for (long long i = 0; i < n; ++i) {
    outcomes[static_cast<std::size_t>(i)] = evaluate(config, static_cast<std::size_t>(i));
  }

  FuzzReport rep;
  rep.seed = config.seed;
  rep.instances_tried = count;
  for (auto& o : outcomes) {
    rep.rows_evaluated += o.rows.size();
    for (const auto& row : o.rows) {
      if (!row.result.identity_ok) ++rep.identity_failures;
      CheckTally& t = rep.tallies[row.result.check_name + "|" + row.result.phi];
      ++t.runs;
      if (row.result.violated()) ++t.violations;
      const double margin = row.result.relation == Relation::at_least ? row.result.gap : -row.result.gap;
      t.worst_margin = std::min(t.worst_margin, margin);
    }
    rep.blocks.push_back(std::move(o.block));
    for (auto& v : o.violations) rep.violations.push_back(std::move(v));
  }
  return rep;
}

}  // namespace mpineq
