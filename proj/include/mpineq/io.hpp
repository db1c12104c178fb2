#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "mpineq/convexity.hpp"
#include "mpineq/hypergraph.hpp"
#include "mpineq/inequalities.hpp"
#include "mpineq/measure_model.hpp"

namespace mpineq::io {

using nlohmann::json;

/// Instance file: {"v_masses", "e_masses", "kernel" (rows = v-atoms),
/// "weights", optional "interval_domain": [lo, hi] (null = unbounded),
/// optional "meta"}.
struct InstanceDocument {
  Instance instance;
  std::optional<Interval> interval_domain;
  json meta = json::object();
};

InstanceDocument instance_from_json(const json& j);
json to_json(const Instance& inst, const std::optional<Interval>& domain = std::nullopt,
             const json& meta = json::object());
InstanceDocument load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const Instance& inst,
                   const std::optional<Interval>& domain = std::nullopt, const json& meta = json::object());

/// {"k", "incidence", optional "edge_weights"}.
Hypergraph hypergraph_from_json(const json& j);
json to_json(const Hypergraph& h);
Hypergraph load_hypergraph(const std::filesystem::path& path);

json to_json(const CheckResult& r);

/// %.17g
std::string format_double(double x);

std::string csv_header();
/// instance_id,check_name,phi,lhs,rhs,gap,bound,status,tol
std::string csv_row(const std::string& instance_id, const CheckResult& r);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mpineq::io
