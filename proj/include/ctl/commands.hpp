#pragma once

// Experiment drivers behind the `ctl` command-line tool. Each command returns
// a Report whose verdicts depend only on its payload and configuration.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctl/rational.hpp"
#include "ctl/symbolic.hpp"

namespace ctl {

using Json = nlohmann::ordered_json;

struct RunConfig {
  SystemKind system = SystemKind::chacon;
  int depth = 6;
  int levels = 16;
  Rational delta{2, 25};
  /// Defaults to twice the net mesh.
  std::optional<Rational> theta;
  Rational eta{1, 20};
  Rational eps{1, 10};
  /// Command-specific defaults when unset.
  std::optional<std::int64_t> orbit_len;
  std::optional<int> word_len;
  std::uint64_t seed = 0;
  std::string out;
  int workers = 1;
  int trials = 10000;
  int candidates = 32;
  bool refine = false;
  std::size_t max_nodes = std::size_t{1} << 22;

  /// Throws ParameterError on inconsistent values.
  void validate() const;
  Json to_json() const;
};

struct Verdict {
  std::string name;
  bool pass = false;
};

struct Report {
  std::string command;
  Json config;
  Json result = Json::object();
  std::vector<Verdict> verdicts;
  Json timings = Json::object();
  /// Side files (name -> contents) written next to the report.
  std::map<std::string, std::string> side_files;

  bool passed() const;
  /// Everything but the timings, in a fixed field order.
  Json payload_json() const;
  Json to_json() const;
};

Report cmd_orbit_stats(const RunConfig& config);
Report cmd_mixing_test(const RunConfig& config);
Report cmd_separation(const RunConfig& config);
Report cmd_proof_paths(const RunConfig& config);
Report cmd_arclike(const RunConfig& config);

/// Writes <out>/<command>.json and the side files; no-op when out is empty.
void write_report(const Report& report, const std::string& out_dir);

/// `CTL_MAX_NODES` if set and valid, else `fallback`.
std::size_t node_budget_from_env(std::size_t fallback);

}  // namespace ctl
