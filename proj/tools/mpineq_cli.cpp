#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mpineq/error.hpp"
#include "mpineq/fuzz.hpp"
#include "mpineq/io.hpp"
#include "mpineq/suite.hpp"

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitInvalid = 2;

struct Shared {
  double tol = 1e-9;
  double eq_tol = 1e-9;
  std::uint64_t seed = 1;
  std::string report;
  bool json = false;
};

struct SourceArgs {
  std::string instance;
  std::string hypergraph;
  std::string gen;
};

void add_shared(CLI::App* cmd, Shared& s) {
  cmd->add_option("--tol", s.tol, "Absolute and relative tolerance")->capture_default_str();
  cmd->add_option("--eq-tol", s.eq_tol, "Equality tolerance on |gap|")->capture_default_str();
  cmd->add_option("--seed", s.seed, "Seed for generators and random scans")->capture_default_str();
  cmd->add_option("--report", s.report, "Write the CSV report here");
  cmd->add_flag("--json", s.json, "Print the report as JSON on stdout");
}

void add_source(CLI::App* cmd, SourceArgs& a) {
  auto* inst = cmd->add_option("--instance", a.instance, "Instance JSON file");
  auto* hyp = cmd->add_option("--hypergraph", a.hypergraph, "Hypergraph JSON file");
  auto* gen = cmd->add_option("--gen", a.gen, "Generator spec, e.g. matrix:p=4,q=3,c=2");
  inst->excludes(hyp)->excludes(gen);
  hyp->excludes(gen);
}

mpineq::Source load_source(const SourceArgs& a, std::uint64_t seed) {
  if (!a.instance.empty()) return mpineq::source_from_instance_file(a.instance);
  if (!a.hypergraph.empty()) return mpineq::source_from_hypergraph_file(a.hypergraph);
  if (!a.gen.empty()) return mpineq::generate_source(a.gen, seed);
  throw mpineq::Error(mpineq::ErrorKind::invalid_argument, "one of --instance, --hypergraph or --gen is required");
}

std::vector<std::string> split_commas(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const auto comma = item.find(',', start);
      const std::string part = item.substr(start, comma - start);
      if (!part.empty()) out.push_back(part);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

void emit(const std::string& csv, const nlohmann::json& j, const Shared& s) {
  if (!s.report.empty()) mpineq::io::write_text(s.report, csv);
  if (s.json) {
    std::cout << j.dump(2) << "\n";
  } else if (s.report.empty()) {
    std::cout << csv;
  }
}

mpineq::SuiteConfig base_config(const Shared& s) {
  mpineq::SuiteConfig cfg;
  cfg.tol = s.tol;
  cfg.eq_tol = s.eq_tol;
  cfg.seed = s.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Check Jensen-type degree inequalities on atomic measure-space pairs"};
  app.require_subcommand(1);

  Shared verify_shared, generate_shared, fuzz_shared, sweep_shared;
  SourceArgs verify_src, sweep_src;

  auto* verify = app.add_subcommand("verify", "Run checks on one instance");
  add_shared(verify, verify_shared);
  add_source(verify, verify_src);
  std::vector<std::string> verify_phi;
  std::vector<std::string> verify_checks;
  std::vector<std::size_t> erase;
  std::size_t verify_trials = 100;
  verify->add_option("--phi", verify_phi, "phi spec: log, id, pow:<r> (repeatable; default log and id)");
  verify->add_option("--checks", verify_checks, "Check names, comma separated (default all)");
  verify->add_option("--erase", erase, "0-based e-atom indices removed by the erasure check (default: last)");
  verify->add_option("--trials", verify_trials, "Random profiles for the variational scan")->capture_default_str();

  auto* generate = app.add_subcommand("generate", "Write a generated instance as JSON");
  add_shared(generate, generate_shared);
  std::string gen_spec;
  std::string out_path;
  generate->add_option("--gen", gen_spec, "Generator spec")->required();
  generate->add_option("--out", out_path, "Output file (default stdout)");

  auto* fuzz_cmd = app.add_subcommand("fuzz", "Search random instances for violations and shrink them");
  add_shared(fuzz_cmd, fuzz_shared);
  std::size_t count = 100;
  std::vector<std::string> fuzz_phi;
  std::vector<std::string> fuzz_checks;
  std::size_t fuzz_trials = 20;
  fuzz_cmd->add_option("--count", count, "Number of instances")->capture_default_str();
  fuzz_cmd->add_option("--phi", fuzz_phi, "phi specs (default log, id, pow:2, pow:-0.5)");
  fuzz_cmd->add_option("--checks", fuzz_checks, "Check names, comma separated (default all)");
  fuzz_cmd->add_option("--trials", fuzz_trials, "Random profiles per variational scan")->capture_default_str();

  auto* sweep_cmd = app.add_subcommand("sweep", "Main inequality across a power family");
  add_shared(sweep_cmd, sweep_shared);
  add_source(sweep_cmd, sweep_src);
  std::string family;
  sweep_cmd->add_option("--family", family, "pow:<from>..<to>:<step>")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      mpineq::SuiteConfig cfg = base_config(verify_shared);
      if (!verify_phi.empty()) cfg.phi_list = verify_phi;
      if (!verify_checks.empty()) cfg.checks = split_commas(verify_checks);
      cfg.trials = verify_trials;
      const mpineq::Source src = load_source(verify_src, verify_shared.seed);
      if (!erase.empty()) {
        std::vector<bool> mask(src.instance.e_count(), false);
        for (std::size_t e : erase) {
          if (e >= mask.size()) {
            throw mpineq::Error(mpineq::ErrorKind::invalid_argument,
                                "--erase index " + std::to_string(e) + " out of range");
          }
          mask[e] = true;
        }
        cfg.erase_mask = std::move(mask);
      }
      const mpineq::SuiteReport rep = mpineq::run_checks(src, cfg);
      emit(rep.to_csv(), rep.to_json(), verify_shared);
      for (const auto& s : rep.skipped) {
        std::cerr << "skipped " << s.check << " [" << s.phi << "]: " << s.reason << "\n";
      }
      std::cerr << "rows=" << rep.rows.size() << " asserted_violations=" << rep.asserted_violations()
                << " informational_violations=" << rep.informational_violations() << "\n";
      return rep.asserted_violations() > 0 ? kExitViolation : 0;
    }
    if (generate->parsed()) {
      const mpineq::Source src = mpineq::generate_source(gen_spec, generate_shared.seed);
      const nlohmann::json j =
          src.hypergraph ? mpineq::io::to_json(*src.hypergraph) : mpineq::io::to_json(src.instance, src.domain);
      if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
      } else {
        mpineq::io::write_text(out_path, j.dump(2) + "\n");
      }
      return 0;
    }
    if (fuzz_cmd->parsed()) {
      mpineq::SuiteConfig cfg = base_config(fuzz_shared);
      cfg.phi_list = fuzz_phi.empty() ? std::vector<std::string>{"log", "id", "pow:2", "pow:-0.5"} : fuzz_phi;
      if (!fuzz_checks.empty()) cfg.checks = split_commas(fuzz_checks);
      cfg.trials = fuzz_trials;
      const mpineq::FuzzReport rep = mpineq::fuzz(cfg, count);
      emit(rep.to_csv(), rep.to_json(), fuzz_shared);
      std::cerr << "instances=" << rep.instances_tried << " rows=" << rep.rows_evaluated
                << " asserted_violations=" << rep.asserted_violations()
                << " informational_violations=" << rep.informational_violations()
                << " identity_failures=" << rep.identity_failures << "\n";
      return rep.asserted_violations() > 0 ? kExitViolation : 0;
    }
    if (sweep_cmd->parsed()) {
      const mpineq::Source src = load_source(sweep_src, sweep_shared.seed);
      const mpineq::SuiteReport rep = mpineq::sweep(src, family, base_config(sweep_shared));
      emit(rep.to_csv(), rep.to_json(), sweep_shared);
      for (const auto& s : rep.skipped) {
        std::cerr << "skipped " << s.check << " [" << s.phi << "]: " << s.reason << "\n";
      }
      return rep.asserted_violations() > 0 ? kExitViolation : 0;
    }
  } catch (const mpineq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return 0;
}
