#include "mpineq/suite.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "mpineq/error.hpp"
#include "mpineq/io.hpp"
#include "mpineq/random.hpp"

namespace mpineq {

namespace {

bool is_hypothesis_failure(ErrorKind kind) {
  return kind == ErrorKind::domain || kind == ErrorKind::boundary_mean || kind == ErrorKind::shape ||
         kind == ErrorKind::non_finite;
}

double parse_number(std::string_view text, std::string_view what) {
  double x = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error(ErrorKind::parse, "bad number \"" + std::string(text) + "\" in " + std::string(what));
  }
  return x;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
  const double x = parse_number(text, what);
  if (!(x >= 1.0) || x != std::floor(x) || x > 1e9) {
    throw Error(ErrorKind::parse, std::string(what) + " needs a positive integer, got \"" + std::string(text) + "\"");
  }
  return static_cast<std::size_t>(x);
}

// "key=value,key=value"
std::map<std::string, std::string, std::less<>> parse_params(std::string_view text, std::string_view spec) {
  std::map<std::string, std::string, std::less<>> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(ErrorKind::parse, "expected key=value in generator spec \"" + std::string(spec) + "\"");
    }
    out.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

class Params {
 public:
  Params(std::string_view text, std::string_view spec) : map_(parse_params(text, spec)), spec_(spec) {}

  double number(const char* key, std::optional<double> fallback = std::nullopt) {
    auto it = map_.find(key);
    if (it == map_.end()) {
      if (!fallback) throw Error(ErrorKind::parse, std::string("generator spec \"") + spec_ + "\" needs " + key);
      return *fallback;
    }
    used_.push_back(key);
    return parse_number(it->second, key);
  }

  std::size_t count(const char* key, std::optional<std::size_t> fallback = std::nullopt) {
    auto it = map_.find(key);
    if (it == map_.end()) {
      if (!fallback) throw Error(ErrorKind::parse, std::string("generator spec \"") + spec_ + "\" needs " + key);
      return *fallback;
    }
    used_.push_back(key);
    return parse_count(it->second, key);
  }

  std::string text(const char* key, std::string fallback) {
    auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    used_.push_back(key);
    return it->second;
  }

  void finish() const {
    for (const auto& [key, value] : map_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        throw Error(ErrorKind::parse, "unknown key \"" + key + "\" in generator spec \"" + spec_ + "\"");
      }
    }
  }

 private:
  std::map<std::string, std::string, std::less<>> map_;
  std::string spec_;
  std::vector<std::string> used_;
};

Source sequence_source(std::size_t n, double ratio_a, double ratio_u, std::uint64_t seed, std::string id) {
  if (!(ratio_a > 0.0 && ratio_a < 1.0) || !(ratio_u > 0.0 && ratio_u < 1.0)) {
    throw Error(ErrorKind::parse, "sequence ratios must lie in (0, 1)");
  }
  // Geometric decay with a seeded, index-determined jitter in [0.5, 1.5).
  auto jitter = [seed](std::size_t i, std::uint64_t stream) {
    return 0.5 + Rng(mix_seed(mix_seed(seed, stream), i)).uniform();
  };
  auto a = [=](std::size_t i) { return std::pow(ratio_a, static_cast<double>(i)) * jitter(i, 1); };
  auto u = [=](std::size_t i) { return std::pow(ratio_u, static_cast<double>(i)) * jitter(i, 2); };
  auto one = [](std::size_t) { return 1.0; };
  SequenceModel model = SequenceModel::generate(n, a, one, u);
  Source src{std::move(id), SourceKind::sequence, from_sequences(model, diagonal_kernel(model)), std::nullopt,
             std::nullopt, std::nullopt};
  src.sequence = std::move(model);
  return src;
}

Source interval_source(std::size_t nodes, const std::string& rule, double amp, std::uint64_t seed, std::string id) {
  if (!(std::abs(amp) <= 1.0)) throw Error(ErrorKind::parse, "interval amp must lie in [-1, 1]");
  QuadratureScheme e_scheme;
  e_scheme.node_count = nodes;
  if (rule == "gl") {
    e_scheme.rule = QuadratureRule::gauss_legendre;
  } else if (rule == "midpoint") {
    e_scheme.rule = QuadratureRule::midpoint;
  } else if (rule == "trapezoid") {
    e_scheme.rule = QuadratureRule::trapezoid_periodic;
  } else {
    throw Error(ErrorKind::parse, "interval rule must be gl, midpoint or trapezoid, got \"" + rule + "\"");
  }
  // The v-axis uses the midpoint rule, which integrates the periodic kernel
  // exactly, so every column integral is 1.
  QuadratureScheme v_scheme{QuadratureRule::midpoint, nodes, 0.0, 1.0};
  Rng rng(mix_seed(seed, 0x1a7));
  const double phase = 2.0 * std::numbers::pi * rng.uniform();
  const double slope = rng.uniform(0.25, 2.0);
  auto kernel = [=](double v, double e) { return 1.0 + amp * std::sin(2.0 * std::numbers::pi * (v - e) + phase); };
  auto wt = [=](double e) { return 0.5 + slope * e; };
  return Source{std::move(id), SourceKind::interval, from_interval(kernel, wt, v_scheme, e_scheme), std::nullopt,
                std::nullopt, std::nullopt};
}

struct Runner {
  const Source& source;
  const SuiteConfig& config;
  Tolerance tol;
  SuiteReport report;

  void add(CheckResult r) { report.rows.push_back({source.id, std::move(r)}); }
  void skip(const std::string& check, const std::string& phi, std::string reason) {
    report.skipped.push_back({source.id, check, phi, std::move(reason)});
  }

  // Runs `fn`; hypothesis failures become skipped entries.
  template <class Fn>
  void attempt(const std::string& check, const std::string& phi, Fn&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      if (!is_hypothesis_failure(e.kind())) throw;
      skip(check, phi, e.what());
    }
  }
};

std::vector<bool> default_mask(std::size_t q) {
  std::vector<bool> mask(q, false);
  mask.back() = true;
  return mask;
}

}  // namespace

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::file: return "file";
    case SourceKind::matrix: return "matrix";
    case SourceKind::hypergraph: return "hypergraph";
    case SourceKind::sequence: return "sequence";
    case SourceKind::interval: return "interval";
  }
  return "unknown";
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{
      "main",          "stability",      "concave-reversal", "variational",
      "erasure",       "power-mean",     "marginal-power-mean", "entropy",
      "geometric-mean", "sequence",      "gm-of-gms",        "power-mean:paper-literal",
      "geometric-mean:paper-literal"};
  return names;
}

const std::vector<std::string>& asserted_checks() {
  static const std::vector<std::string> names(known_checks().begin(), known_checks().end() - 2);
  return names;
}

void SuiteConfig::validate() const {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw Error(ErrorKind::invalid_argument, "tol must be positive");
  if (!(eq_tol > 0.0) || !std::isfinite(eq_tol)) throw Error(ErrorKind::invalid_argument, "eq_tol must be positive");
  if (trials < 1) throw Error(ErrorKind::invalid_argument, "trials must be at least 1");
  if (checks.empty()) throw Error(ErrorKind::invalid_argument, "no checks selected");
  for (const auto& c : checks) {
    if (c != "all" && std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end()) {
      throw Error(ErrorKind::parse, "unknown check \"" + c + "\"");
    }
  }
  if (phi_list.empty()) throw Error(ErrorKind::invalid_argument, "no phi selected");
  for (const auto& p : phi_list) PhiSpec::parse(p);
  if (chain_exponents.size() < 2) throw Error(ErrorKind::invalid_argument, "power-mean chain needs two exponents");
  for (std::size_t i = 0; i < chain_exponents.size(); ++i) {
    if (!(chain_exponents[i] > 0.0) || (i > 0 && !(chain_exponents[i] > chain_exponents[i - 1]))) {
      throw Error(ErrorKind::invalid_argument, "chain exponents must be positive and strictly ascending");
    }
  }
  for (double p : marginal_exponents) {
    if (!(p >= 1.0)) throw Error(ErrorKind::invalid_argument, "marginal exponents must be >= 1");
  }
}

std::size_t SuiteReport::asserted_violations() const noexcept {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) {
    return r.result.asserted && r.result.violated();
  }));
}

std::size_t SuiteReport::informational_violations() const noexcept {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) {
    return !r.result.asserted && r.result.violated();
  }));
}

std::string SuiteReport::to_csv() const {
  std::string out = io::csv_header() + "\n";
  for (const auto& row : rows) out += io::csv_row(row.instance_id, row.result) + "\n";
  return out;
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json j;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json r = io::to_json(row.result);
    r["instance_id"] = row.instance_id;
    j["rows"].push_back(std::move(r));
  }
  j["skipped"] = nlohmann::json::array();
  for (const auto& s : skipped) {
    j["skipped"].push_back({{"instance_id", s.instance_id}, {"check", s.check}, {"phi", s.phi}, {"reason", s.reason}});
  }
  j["asserted_violations"] = asserted_violations();
  j["informational_violations"] = informational_violations();
  return j;
}

Source source_from_instance_file(const std::filesystem::path& path) {
  io::InstanceDocument doc = io::load_instance(path);
  return Source{path.stem().string(), SourceKind::file, std::move(doc.instance), doc.interval_domain, std::nullopt,
                std::nullopt};
}

Source source_from_hypergraph_file(const std::filesystem::path& path) {
  Hypergraph h = io::load_hypergraph(path);
  Instance inst = to_instance(h);
  return Source{path.stem().string(), SourceKind::hypergraph, std::move(inst), std::nullopt, std::move(h),
                std::nullopt};
}

Source generate_source(std::string_view spec, std::uint64_t seed, std::string id) {
  const auto colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  Params params(colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1), spec);
  Source out{std::move(id), SourceKind::matrix, Instance({{1.0}, {}}, {{1.0}, {}}, DenseMatrix(1, 1, 1.0), {1.0}),
             std::nullopt, std::nullopt, std::nullopt};
  if (kind == "matrix") {
    const std::size_t p = params.count("p");
    const std::size_t q = params.count("q");
    const double c = params.number("c", 1.0);
    const WeightRange w{params.number("wlo", 0.5), params.number("whi", 2.0)};
    params.finish();
    out.instance = random_instance(p, q, c, seed, w);
  } else if (kind == "hypergraph") {
    const std::size_t p = params.count("p");
    const std::size_t q = params.count("q");
    const std::size_t k = params.count("k");
    const double regular = params.number("regular", 0.0);
    params.finish();
    Hypergraph h = random_hypergraph(p, q, static_cast<std::int64_t>(k), seed, regular != 0.0);
    out.kind = SourceKind::hypergraph;
    out.instance = to_instance(h);
    out.hypergraph = std::move(h);
  } else if (kind == "sequence") {
    const std::size_t n = params.count("n");
    const double ra = params.number("ratio_a", 0.5);
    const double ru = params.number("ratio_u", 0.5);
    params.finish();
    out = sequence_source(n, ra, ru, seed, std::move(out.id));
  } else if (kind == "interval") {
    const std::size_t nodes = params.count("nodes");
    const std::string rule = params.text("rule", "gl");
    const double amp = params.number("amp", 0.5);
    params.finish();
    out = interval_source(nodes, rule, amp, seed, std::move(out.id));
  } else {
    throw Error(ErrorKind::parse, "unknown generator \"" + std::string(kind) +
                                      "\" (expected matrix, hypergraph, sequence or interval)");
  }
  return out;
}

SuiteReport run_checks(const Source& source, const SuiteConfig& config) {
  config.validate();
  std::vector<std::string> selected;
  for (const auto& c : config.checks) {
    if (c == "all") {
      selected.insert(selected.end(), asserted_checks().begin(), asserted_checks().end());
    } else {
      selected.push_back(c);
    }
  }
  auto wanted = [&](std::string_view name) { return std::find(selected.begin(), selected.end(), name) != selected.end(); };

  const Instance& inst = source.instance;
  const DegreeProfile profile = characterize(inst, config.column_tol);
  Runner run{source, config, config.tolerance(), {}};
  const Tolerance& tol = run.tol;

  for (const auto& phi_text : config.phi_list) {
    PhiSpec phi = PhiSpec::parse(phi_text);
    if (source.domain) {
      try {
        phi = phi.with_domain(*source.domain);
      } catch (const Error& e) {
        for (const auto& name : {"main", "stability", "concave-reversal", "variational", "erasure", "sequence"}) {
          if (wanted(name)) run.skip(name, phi.label(), e.what());
        }
        continue;
      }
    }
    const HypothesisReport hyp = check_hypotheses(inst, phi, config.column_tol);
    if (!hyp.all_passed()) {
      for (const auto& name : {"main", "stability", "concave-reversal", "variational"}) {
        if (wanted(name)) run.skip(name, phi.label(), hyp.first_failure());
      }
    } else {
      const ShapeCertificate cert = certify_shape(phi, profile.min_delta(), profile.max_delta());
      const bool convex = is_convex(cert.shape) || cert.degenerate;
      const bool concave = is_concave(cert.shape) || cert.degenerate;
      const std::string shape_note = "f is " + std::string(to_string(cert.shape)) + " on the delta range";
      if (wanted("main")) {
        if (convex) {
          run.attempt("main", phi.label(), [&] { run.add(main_inequality(inst, profile, phi, tol)); });
        } else {
          run.skip("main", phi.label(), shape_note);
        }
      }
      if (wanted("stability")) {
        if (convex) {
          run.attempt("stability", phi.label(), [&] {
            run.add(stability_check(inst, profile, phi, stability_params(profile, phi), tol));
          });
        } else {
          run.skip("stability", phi.label(), shape_note);
        }
      }
      if (wanted("concave-reversal")) {
        if (concave) {
          run.attempt("concave-reversal", phi.label(), [&] { run.add(concave_reversal(inst, profile, phi, tol)); });
        } else {
          run.skip("concave-reversal", phi.label(), shape_note);
        }
      }
      if (wanted("variational")) {
        run.attempt("variational", phi.label(), [&] {
          run.add(variational_scan(profile, phi, config.trials, config.seed, tol));
        });
      }
    }
    if (wanted("erasure")) {
      const std::vector<bool> mask = config.erase_mask ? *config.erase_mask : default_mask(inst.e_count());
      try {
        run.add(erasure_check(inst, mask, phi, tol, config.column_tol));
      } catch (const Error& e) {
        if (!is_hypothesis_failure(e.kind()) && e.kind() != ErrorKind::zero_weight_mass) throw;
        run.skip("erasure", phi.label(), e.what());
      }
    }
    if (wanted("sequence")) {
      if (source.sequence) {
        run.attempt("sequence", phi.label(), [&] {
          auto [first, second] = sequence_inequalities(*source.sequence, phi, tol);
          run.add(std::move(first));
          if (&phi_text == &config.phi_list.front()) run.add(std::move(second));
        });
      } else {
        run.skip("sequence", phi.label(), "source is not a sequence model");
      }
    }
  }

  if (wanted("power-mean")) {
    run.attempt("power-mean", "-", [&] {
      for (auto& r : power_mean_chain(inst, profile, config.chain_exponents, PowerMeanVariant::normalized, tol)) {
        run.add(std::move(r));
      }
    });
  }
  if (wanted("power-mean:paper-literal")) {
    run.attempt("power-mean:paper-literal", "-", [&] {
      for (auto& r : power_mean_chain(inst, profile, config.chain_exponents, PowerMeanVariant::paper_literal, tol)) {
        run.add(std::move(r));
      }
    });
  }
  if (wanted("marginal-power-mean")) {
    for (double p : config.marginal_exponents) {
      run.attempt("marginal-power-mean", "-", [&] {
        for (auto& r : marginal_power_mean(inst, profile, p, tol)) run.add(std::move(r));
      });
    }
  }
  if (wanted("entropy")) {
    run.attempt("entropy", "-", [&] { run.add(entropy_check(inst, profile, tol)); });
  }
  if (wanted("geometric-mean")) {
    run.attempt("geometric-mean", "-",
                [&] { run.add(geometric_mean_check(inst, profile, tol, GeometricVariant::normalized)); });
  }
  if (wanted("geometric-mean:paper-literal")) {
    run.attempt("geometric-mean:paper-literal", "-",
                [&] { run.add(geometric_mean_check(inst, profile, tol, GeometricVariant::paper_literal)); });
  }
  if (wanted("gm-of-gms")) {
    if (!source.hypergraph) {
      run.skip("gm-of-gms", "-", "source is not a hypergraph");
    } else if (!source.hypergraph->unit_weights()) {
      run.skip("gm-of-gms", "-", "hypergraph has non-unit edge weights");
    } else {
      run.add(gm_of_gms_check(*source.hypergraph, tol));
    }
  }

  if (run.report.rows.empty()) {
    std::string why;
    for (const auto& s : run.report.skipped) why += "\n  " + s.check + " [" + s.phi + "]: " + s.reason;
    throw Error(ErrorKind::invalid_argument, "no applicable checks for " + source.id + why);
  }
  return std::move(run.report);
}

std::vector<double> parse_power_family(std::string_view family) {
  const auto bad = [&] {
    return Error(ErrorKind::parse, "family must look like pow:<from>..<to>:<step>, got \"" + std::string(family) + "\"");
  };
  if (family.substr(0, 4) != "pow:") throw bad();
  std::string_view rest = family.substr(4);
  const auto dots = rest.find("..");
  if (dots == std::string_view::npos) throw bad();
  const auto colon = rest.find(':', dots + 2);
  if (colon == std::string_view::npos) throw bad();
  const double from = parse_number(rest.substr(0, dots), "family");
  const double to = parse_number(rest.substr(dots + 2, colon - dots - 2), "family");
  const double step = parse_number(rest.substr(colon + 1), "family");
  if (!(step > 0.0) || !(from <= to) || !std::isfinite(from) || !std::isfinite(to)) throw bad();
  const double span = (to - from) / step;
  if (span > 1e6) throw Error(ErrorKind::parse, "family has too many members");
  const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = from + static_cast<double>(i) * step;
  return out;
}

SuiteReport sweep(const Source& source, std::string_view family, const SuiteConfig& config) {
  config.validate();
  const std::vector<double> exponents = parse_power_family(family);
  const DegreeProfile profile = characterize(source.instance, config.column_tol);
  Runner run{source, config, config.tolerance(), {}};
  for (double r : exponents) {
    PhiSpec phi = PhiSpec::power(r);
    try {
      if (source.domain) phi = phi.with_domain(*source.domain);
      const ShapeCertificate cert = certify_shape(phi, profile.min_delta(), profile.max_delta());
      if (is_convex(cert.shape) || cert.degenerate) {
        run.add(main_inequality(source.instance, profile, phi, run.tol));
      } else if (is_concave(cert.shape)) {
        run.add(concave_reversal(source.instance, profile, phi, run.tol));
      } else {
        run.skip("sweep", phi.label(), "f is neither convex nor concave on the delta range");
      }
    } catch (const Error& e) {
      if (!is_hypothesis_failure(e.kind())) throw;
      run.skip("sweep", phi.label(), e.what());
    }
  }
  return std::move(run.report);
}

}  // namespace mpineq
