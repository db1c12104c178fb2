#include "mpineq/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "mpineq/error.hpp"

namespace mpineq::io {

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::parse, std::string("missing key \"") + key + "\"");
  return j.at(key);
}

std::vector<double> number_array(const json& j, const char* key) {
  if (!j.is_array()) throw Error(ErrorKind::parse, std::string("\"") + key + "\" must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw Error(ErrorKind::parse, std::string("\"") + key + "\" must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::optional<double> optional_bound(const json& j) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_number()) throw Error(ErrorKind::parse, "interval_domain bounds must be numbers or null");
  return j.get<double>();
}

json bound_to_json(double x) {
  if (std::isinf(x)) return nullptr;
  return x;
}

json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

}  // namespace

InstanceDocument instance_from_json(const json& j) {
  std::vector<double> v_masses = number_array(require(j, "v_masses"), "v_masses");
  std::vector<double> e_masses = number_array(require(j, "e_masses"), "e_masses");
  std::vector<double> weights = number_array(require(j, "weights"), "weights");
  const json& kj = require(j, "kernel");
  if (!kj.is_array()) throw Error(ErrorKind::parse, "\"kernel\" must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : kj) rows.push_back(number_array(row, "kernel"));

  std::optional<Interval> domain;
  if (j.contains("interval_domain") && !j.at("interval_domain").is_null()) {
    const json& d = j.at("interval_domain");
    if (!d.is_array() || d.size() != 2) throw Error(ErrorKind::parse, "interval_domain must be [lo, hi]");
    const auto lo = optional_bound(d[0]);
    const auto hi = optional_bound(d[1]);
    Interval iv;
    iv.lo = lo.value_or(-std::numeric_limits<double>::infinity());
    iv.hi = hi.value_or(std::numeric_limits<double>::infinity());
    iv.lo_closed = lo.has_value();
    iv.hi_closed = hi.has_value();
    if (!(iv.lo < iv.hi)) throw Error(ErrorKind::parse, "interval_domain needs lo < hi");
    domain = iv;
  }
  json meta = j.contains("meta") ? j.at("meta") : json::object();
  return InstanceDocument{build_discrete(std::move(v_masses), std::move(e_masses), DenseMatrix::from_rows(rows),
                                         std::move(weights)),
                          domain, std::move(meta)};
}

json to_json(const Instance& inst, const std::optional<Interval>& domain, const json& meta) {
  json j;
  j["v_masses"] = inst.v_space().masses;
  j["e_masses"] = inst.e_space().masses;
  json kernel = json::array();
  for (std::size_t v = 0; v < inst.v_count(); ++v) {
    const auto row = inst.kernel().row(v);
    kernel.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["kernel"] = std::move(kernel);
  j["weights"] = std::vector<double>(inst.weights().begin(), inst.weights().end());
  if (domain) j["interval_domain"] = json::array({bound_to_json(domain->lo), bound_to_json(domain->hi)});
  if (!meta.empty()) j["meta"] = meta;
  return j;
}

InstanceDocument load_instance(const std::filesystem::path& path) {
  try {
    return instance_from_json(json::parse(read_text(path)));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, path.string() + ": " + e.what());
  }
}

void save_instance(const std::filesystem::path& path, const Instance& inst, const std::optional<Interval>& domain,
                   const json& meta) {
  write_text(path, to_json(inst, domain, meta).dump(2) + "\n");
}

Hypergraph hypergraph_from_json(const json& j) {
  const json& kj = require(j, "k");
  if (!kj.is_number_integer()) throw Error(ErrorKind::parse, "\"k\" must be an integer");
  const json& inc = require(j, "incidence");
  if (!inc.is_array()) throw Error(ErrorKind::parse, "\"incidence\" must be an array of rows");
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& row : inc) {
    if (!row.is_array()) throw Error(ErrorKind::parse, "\"incidence\" must be an array of rows");
    std::vector<std::int64_t> r;
    for (const auto& x : row) {
      if (!x.is_number_integer()) throw Error(ErrorKind::parse, "incidence entries must be integers");
      r.push_back(x.get<std::int64_t>());
    }
    rows.push_back(std::move(r));
  }
  std::vector<double> weights;
  if (j.contains("edge_weights")) weights = number_array(j.at("edge_weights"), "edge_weights");
  return Hypergraph::from_rows(kj.get<std::int64_t>(), rows, std::move(weights));
}

json to_json(const Hypergraph& h) {
  json j;
  j["k"] = h.k();
  json inc = json::array();
  for (std::size_t v = 0; v < h.vertex_count(); ++v) {
    json row = json::array();
    for (std::size_t e = 0; e < h.edge_count(); ++e) row.push_back(h.multiplicity(v, e));
    inc.push_back(std::move(row));
  }
  j["incidence"] = std::move(inc);
  if (!h.unit_weights()) j["edge_weights"] = std::vector<double>(h.edge_weights().begin(), h.edge_weights().end());
  return j;
}

Hypergraph load_hypergraph(const std::filesystem::path& path) {
  try {
    return hypergraph_from_json(json::parse(read_text(path)));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, path.string() + ": " + e.what());
  }
}

json to_json(const CheckResult& r) {
  json j;
  j["check_name"] = r.check_name;
  j["phi"] = r.phi;
  j["relation"] = r.relation == Relation::at_least ? ">=" : "<=";
  j["lhs"] = number(r.lhs);
  j["rhs"] = number(r.rhs);
  j["gap"] = number(r.gap);
  j["bound"] = r.bound ? number(*r.bound) : json(nullptr);
  j["status"] = std::string(to_string(r.status));
  j["equality"] = r.equality_flag;
  j["tol"] = number(r.tol);
  j["asserted"] = r.asserted;
  j["lhs_identity"] = r.lhs_identity ? number(*r.lhs_identity) : json(nullptr);
  j["identity_ok"] = r.identity_ok;
  j["delta_constant"] = r.delta_constant ? json(*r.delta_constant) : json(nullptr);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_header() { return "instance_id,check_name,phi,lhs,rhs,gap,bound,status,tol"; }

std::string csv_row(const std::string& instance_id, const CheckResult& r) {
  std::string out;
  out += instance_id;
  out += ',' + r.check_name;
  out += ',' + r.phi;
  out += ',' + format_double(r.lhs);
  out += ',' + format_double(r.rhs);
  out += ',' + format_double(r.gap);
  out += ',' + (r.bound ? format_double(*r.bound) : std::string());
  out += ',' + std::string(to_string(r.status));
  out += ',' + format_double(r.tol);
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::invalid_argument, "write failed for " + path.string());
}

}  // namespace mpineq::io
