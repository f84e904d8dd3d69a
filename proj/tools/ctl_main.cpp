// ctl: experiments on the Chacon mapping torus and the sin(1/x) curve.
// Exit codes: 0 pass, 1 fail, 2 usage or parameter error, 3 resource overrun.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "ctl/commands.hpp"
#include "ctl/errors.hpp"

namespace {

struct RawOptions {
  std::string system = "chacon";
  int depth = 6;
  int levels = 16;
  std::string delta = "2/25";
  std::string theta;
  std::string eta = "1/20";
  std::string eps = "1/10";
  std::int64_t orbit_len = 0;
  int word_len = 0;
  std::uint64_t seed = 0;
  std::string out;
  int workers = std::max(1u, std::thread::hardware_concurrency());
  int trials = 10000;
  int candidates = 32;
  bool refine = false;
};

void add_common(CLI::App* sub, RawOptions& o) {
  sub->add_option("--system", o.system, "chacon | odometer2 | fullshift2")->capture_default_str();
  sub->add_option("--depth", o.depth, "Cantor resolution k of the net")->capture_default_str();
  sub->add_option("--levels", o.levels, "height levels m of the net")->capture_default_str();
  sub->add_option("--delta", o.delta, "separation parameter, 0 < delta < 1/10")->capture_default_str();
  sub->add_option("--theta", o.theta, "product-net adjacency threshold (default 2*mesh)");
  sub->add_option("--eta", o.eta, "diagonal avoidance radius")->capture_default_str();
  sub->add_option("--eps", o.eps, "epsilon of the arc-like map")->capture_default_str();
  sub->add_option("--orbit-len", o.orbit_len, "orbit length N (command default when 0)");
  sub->add_option("--word-len", o.word_len, "word length L (command default when 0)");
  sub->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  sub->add_option("--out", o.out, "directory for the JSON report and side files");
  sub->add_option("--workers", o.workers, "worker threads")->capture_default_str();
  sub->add_option("--trials", o.trials, "sampled points per proof-path case")->capture_default_str();
  sub->add_option("--candidates", o.candidates, "seed pairs ranked by the mixing search")
      ->capture_default_str();
  sub->add_flag("--refine", o.refine, "repeat the separation check at (k+1, 2m)");
}

ctl::RunConfig to_config(const RawOptions& o) {
  ctl::RunConfig c;
  c.system = ctl::parse_system_kind(o.system);
  c.depth = o.depth;
  c.levels = o.levels;
  c.delta = ctl::parse_rational(o.delta);
  if (!o.theta.empty()) c.theta = ctl::parse_rational(o.theta);
  c.eta = ctl::parse_rational(o.eta);
  c.eps = ctl::parse_rational(o.eps);
  if (o.orbit_len != 0) c.orbit_len = o.orbit_len;
  if (o.word_len != 0) c.word_len = o.word_len;
  c.seed = o.seed;
  c.out = o.out;
  c.workers = o.workers;
  c.trials = o.trials;
  c.candidates = o.candidates;
  c.refine = o.refine;
  c.max_nodes = ctl::node_budget_from_env(c.max_nodes);
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification workbench for the Chacon mapping torus and the sin(1/x) curve"};
  app.require_subcommand(1);
  RawOptions opts;
  struct Entry {
    const char* name;
    const char* help;
    ctl::Report (*run)(const ctl::RunConfig&);
  };
  const Entry entries[] = {
      {"orbit-stats", "word coverage of forward and backward orbits", ctl::cmd_orbit_stats},
      {"mixing-test", "word-pair coverage of a product orbit", ctl::cmd_mixing_test},
      {"separation", "components of sigma(K) and the diagonal sandwich on the product net",
       ctl::cmd_separation},
      {"proof-paths", "audit of the explicit paths to M", ctl::cmd_proof_paths},
      {"arclike", "eps-map, chain obstruction and separation on the sin(1/x) curve",
       ctl::cmd_arclike},
  };
  for (const auto& e : entries) add_common(app.add_subcommand(e.name, e.help), opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    ctl::RunConfig config = to_config(opts);
    for (const auto& e : entries) {
      if (!app.got_subcommand(e.name)) continue;
      ctl::Report report;
      try {
        report = e.run(config);
      } catch (const ctl::ResourceError& err) {
        ctl::Json partial{{"command", e.name}, {"config", config.to_json()}, {"error", err.what()}};
        std::cout << partial.dump(2) << '\n';
        std::cerr << "resource limit: " << err.what() << '\n';
        return 3;
      }
      ctl::write_report(report, config.out);
      std::cout << report.to_json().dump(2) << '\n';
      return report.passed() ? 0 : 1;
    }
  } catch (const ctl::ResourceError& err) {
    std::cerr << "resource limit: " << err.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const ctl::ResolutionError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
  return 2;
}
