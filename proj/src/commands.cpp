#include "ctl/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ctl/arclike.hpp"
#include "ctl/errors.hpp"
#include "ctl/graph_approx.hpp"
#include "ctl/quotient.hpp"
#include "ctl/separation.hpp"

namespace ctl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Json rational_json(const Rational& r) { return to_string(r); }

Json coverage_json(const CoverageReport& r) {
  return Json{{"depth", r.depth},
              {"total", r.total},
              {"visited", r.visited},
              {"fraction", rational_json(r.fraction)},
              {"steps_used", r.steps_used},
              {"plateau_points", r.plateau.size()}};
}

std::string plateau_csv(const CoverageReport& r) {
  std::ostringstream out;
  out << "steps,fraction\n";
  for (const auto& [n, f] : r.plateau) out << n << ',' << to_double(f) << '\n';
  return out.str();
}

void add(Report& report, std::string name, bool pass) {
  report.verdicts.push_back({std::move(name), pass});
}

Report new_report(std::string command, const RunConfig& config) {
  Report report;
  report.command = std::move(command);
  report.config = config.to_json();
  return report;
}

std::size_t isqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

void RunConfig::validate() const {
  if (depth < 1) throw ParameterError("--depth must be positive");
  if (levels < 1) throw ParameterError("--levels must be positive");
  SeparationParams check(delta);
  if (theta && *theta <= 0) throw ParameterError("--theta must be positive");
  if (eta <= 0) throw ParameterError("--eta must be positive");
  if (eps <= 0) throw ParameterError("--eps must be positive");
  if (orbit_len && *orbit_len < 1) throw ParameterError("--orbit-len must be positive");
  if (word_len && (*word_len < 1 || *word_len > kMaxWordLength))
    throw ParameterError("--word-len must lie in [1, " + std::to_string(kMaxWordLength) + "]");
  if (workers < 1) throw ParameterError("--workers must be positive");
  if (trials < 1) throw ParameterError("--trials must be positive");
  if (candidates < 1) throw ParameterError("--candidates must be positive");
}

Json RunConfig::to_json() const {
  Json j;
  j["system"] = std::string(to_string(system));
  j["depth"] = depth;
  j["levels"] = levels;
  j["delta"] = rational_json(delta);
  j["theta"] = theta ? rational_json(*theta) : Json("default");
  j["eta"] = rational_json(eta);
  j["eps"] = rational_json(eps);
  j["orbit_len"] = orbit_len ? Json(*orbit_len) : Json("default");
  j["word_len"] = word_len ? Json(*word_len) : Json("default");
  j["seed"] = seed;
  j["trials"] = trials;
  j["candidates"] = candidates;
  j["refine"] = refine;
  j["max_nodes"] = max_nodes;
  // workers and out do not affect results and are left out of the echo.
  return j;
}

bool Report::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

Json Report::payload_json() const {
  Json j;
  j["command"] = command;
  j["config"] = config;
  j["result"] = result;
  Json v = Json::array();
  for (const auto& verdict : verdicts)
    v.push_back(Json{{"name", verdict.name}, {"verdict", verdict.pass ? "PASS" : "FAIL"}});
  j["verdicts"] = v;
  j["pass"] = passed();
  return j;
}

Json Report::to_json() const {
  Json j = payload_json();
  j["timings"] = timings;
  return j;
}

std::size_t node_budget_from_env(std::size_t fallback) {
  const char* raw = std::getenv("CTL_MAX_NODES");
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || v == 0) return fallback;
  return static_cast<std::size_t>(v);
}

void write_report(const Report& report, const std::string& out_dir) {
  if (out_dir.empty()) return;
  std::filesystem::create_directories(out_dir);
  std::ofstream(std::filesystem::path(out_dir) / (report.command + ".json"))
      << report.to_json().dump(2) << '\n';
  for (const auto& [name, contents] : report.side_files)
    std::ofstream(std::filesystem::path(out_dir) / name) << contents;
}

// ---------------------------------------------------------------------------

Report cmd_orbit_stats(const RunConfig& config) {
  config.validate();
  Report report = new_report("orbit-stats", config);
  const std::int64_t N = config.orbit_len.value_or(1'000'000);
  const int L = config.word_len.value_or(8);
  auto t0 = Clock::now();
  auto sys = SubshiftSystem::create(config.system, static_cast<std::size_t>(2 * N + 4 * L + 8),
                                    config.seed);
  std::int64_t index = sys->two_sided() ? N + L + 2 : static_cast<std::int64_t>(config.seed);
  int resolution = sys->two_sided() ? std::max(1, L / 2 + 1) : L;
  CantorPoint start = CantorPoint::from_index(sys, index, resolution);
  auto fwd = orbit_coverage(start, N, L, Direction::forward, config.workers);
  auto bwd = orbit_coverage(start, N, L, Direction::backward, config.workers);
  report.timings["coverage_seconds"] = seconds_since(t0);

  report.result["orbit_len"] = N;
  report.result["word_len"] = L;
  report.result["start_index"] = index;
  report.result["forward"] = coverage_json(fwd);
  report.result["backward"] = coverage_json(bwd);
  report.side_files["coverage_forward.csv"] = plateau_csv(fwd);
  report.side_files["coverage_backward.csv"] = plateau_csv(bwd);
  add(report, "forward orbit covers language(L)", fwd.fraction == Rational(1));
  add(report, "backward orbit covers language(L)", bwd.fraction == Rational(1));
  return report;
}

Report cmd_mixing_test(const RunConfig& config) {
  config.validate();
  Report report = new_report("mixing-test", config);
  const std::int64_t N = config.orbit_len.value_or(10'000'000);
  const int L = config.word_len.value_or(4);
  auto t0 = Clock::now();
  auto sys = SubshiftSystem::create(config.system, static_cast<std::size_t>(2 * N + 64), config.seed);
  auto found = search_product_seed(sys, N, L, config.candidates, std::min<std::int64_t>(N, 100'000),
                                   config.seed, config.workers);
  report.timings["search_seconds"] = seconds_since(t0);

  report.result["orbit_len"] = N;
  report.result["word_len"] = L;
  report.result["candidates"] = found.candidates_tried;
  report.result["best_offset"] = found.offset;
  report.result["seed_a_index"] = found.first.generator_index().value_or(-1);
  report.result["seed_b_index"] = found.second.generator_index().value_or(-1);
  report.result["product"] = coverage_json(found.report);
  report.side_files["product_coverage.csv"] = plateau_csv(found.report);

  // The weak-mixing definition quoted for f x f ranges over arbitrary nonempty
  // subsets; what is measured here is word-pair coverage of one product orbit.
  report.result["definition_note"] =
      "coverage proxy for transitivity of f x f; the subset-based definition is not tested";

  switch (config.system) {
    case SystemKind::chacon:
    case SystemKind::fullshift2:
      add(report, "product orbit covers language(L)^2", found.report.fraction == Rational(1));
      break;
    case SystemKind::odometer2: {
      Rational cap(2, std::int64_t{1} << L);
      // Every product orbit of the odometer is a single coset {(a+n, b+n)}.
      auto t1 = Clock::now();
      const std::int64_t period = std::int64_t{1} << L;
      Rational worst(0);
      for (std::int64_t a = 0; a < period; ++a)
        for (std::int64_t b = 0; b < period; ++b) {
          auto pa = CantorPoint::from_index(sys, a, L);
          auto pb = CantorPoint::from_index(sys, b, L);
          worst = std::max(worst, product_orbit_coverage(pa, pb, 4 * period, L).fraction);
        }
      report.timings["closure_seconds"] = seconds_since(t1);
      report.result["exhaustive_max_fraction"] = rational_json(worst);
      report.result["control_cap"] = rational_json(cap);
      add(report, "odometer product coverage stays <= 2 * 2^-L", found.report.fraction <= cap);
      add(report, "exhaustive closure: every seed pair <= 2^-L", worst == Rational(1, period));
      break;
    }
  }
  return report;
}

Report cmd_separation(const RunConfig& config) {
  config.validate();
  Report report = new_report("separation", config);
  const std::size_t base_budget = isqrt(config.max_nodes);
  auto sys = SubshiftSystem::create(config.system, 0, config.seed);

  auto run = [&](int depth, int levels, std::optional<Rational> theta, const std::string& key) {
    auto t0 = Clock::now();
    auto net = NetGraph::build(sys, depth, levels, base_budget);
    auto params = SeparationParams::derive(net, config.delta);
    Rational th = theta.value_or(default_theta(net));
    auto pnet = ProductNet::build(net, th, params, config.max_nodes);
    report.timings[key + "_build_seconds"] = seconds_since(t0);
    auto comps = k_components(pnet);
    report.timings[key + "_components_seconds"] = comps.seconds;
    auto t1 = Clock::now();
    auto sandwich = sandwich_check(pnet, params);
    report.timings[key + "_sandwich_seconds"] = seconds_since(t1);

    Json r;
    r["depth"] = depth;
    r["levels"] = levels;
    r["base_nodes"] = net.node_count();
    r["mesh"] = rational_json(net.mesh());
    r["theta"] = rational_json(th);
    r["modulus"] = rational_json(params.eps_hat() / 3);
    r["eps_hat"] = rational_json(params.eps_hat());
    r["product_nodes"] = pnet.node_count();
    r["k_nodes"] = comps.nodes;
    r["k_edges"] = comps.edges;
    r["components"] = comps.components;
    Json sizes = Json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(comps.sizes.size(), 16); ++i)
      sizes.push_back(comps.sizes[i]);
    r["largest_component_sizes"] = sizes;
    r["diagonal_checked"] = sandwich.diagonal_checked;
    r["v0_checked"] = sandwich.v0_checked;
    r["diagonal_violations"] = sandwich.diagonal_outside_v0.size();
    r["containment_violations"] = sandwich.v0_far_from_diagonal.size();
    Json examples = Json::array();
    for (const auto* list : {&sandwich.diagonal_outside_v0, &sandwich.v0_far_from_diagonal})
      for (std::size_t i = 0; i < std::min<std::size_t>(list->size(), 10); ++i)
        examples.push_back(Json{{"node", (*list)[i].node}, {"what", (*list)[i].what}});
    r["violation_examples"] = examples;
    report.result[key] = r;
    if (key == "coarse") {
      std::ostringstream edges;
      net.write_edge_list(edges);
      report.side_files["net_edges.txt"] = edges.str();
    }
    return std::make_pair(comps.components, sandwich.ok());
  };

  auto [components, sandwich_ok] = run(config.depth, config.levels, config.theta, "coarse");
  add(report, "sigma(K) discretization has one component", components == 1);
  add(report, "diagonal <= X^2 minus sigma(K) <= U at resolution", sandwich_ok);
  if (config.refine) {
    std::optional<Rational> fine_theta;
    if (config.theta) {
      // keep theta proportional to the mesh
      Rational coarse_mesh = pow2_neg(config.depth - 1) + Rational(1, config.levels);
      Rational fine_mesh = pow2_neg(config.depth) + Rational(1, 2 * config.levels);
      fine_theta = *config.theta * fine_mesh / coarse_mesh;
    }
    auto [fine_components, fine_ok] = run(config.depth + 1, 2 * config.levels, fine_theta, "fine");
    add(report, "component count does not increase under refinement",
        fine_components <= components);
    add(report, "refined sandwich holds", fine_ok);
  }
  return report;
}

namespace {

struct PathTally {
  std::size_t points = 0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t contract_failures = 0;
  std::vector<Violation> examples;

  Json to_json() const {
    Json ex = Json::array();
    for (const auto& v : examples)
      ex.push_back(Json{{"segment", std::string(to_string(v.kind))},
                        {"parameter", rational_json(v.parameter)},
                        {"predicate", v.predicate}});
    return Json{{"points", points},
                {"samples", samples},
                {"v0_hits", violations},
                {"contract_failures", contract_failures},
                {"examples", ex}};
  }
};

void audit_route(const ProductPrePoint& z, const Route& route, const SeparationParams& params,
                 PathTally& tally) {
  ++tally.points;
  auto audit = audit_path(route, params, 101);
  tally.samples += audit.samples;
  tally.violations += audit.violations.size();
  for (const auto& v : audit.violations)
    if (tally.examples.size() < 10) tally.examples.push_back(v);
  auto start = route.front().start();
  bool starts_at_z = start.first.height == z.first.height && start.second.height == z.second.height &&
                     start.first.base == z.first.base && start.second.base == z.second.base;
  if (!starts_at_z || !route_is_chained(route, true) || !sigma_in_m(route.back().finish()))
    ++tally.contract_failures;
}

}  // namespace

Report cmd_proof_paths(const RunConfig& config) {
  config.validate();
  Report report = new_report("proof-paths", config);
  auto t0 = Clock::now();
  auto sys = SubshiftSystem::create(config.system, 1u << 20, config.seed);
  SeparationParams params(config.delta);
  const Rational& d = params.delta();
  const int k = config.depth;
  std::mt19937_64 rng(config.seed);
  const std::int64_t den = 1000;

  auto draw = [&]() { return random_product_point(rng, sys, k, den); };
  auto uniform_height = [&](Rational lo, Rational hi, bool open_lo) {
    // j / den in [lo, hi) (or (lo, hi] when open_lo)
    std::int64_t a = (lo * den).numerator() / (lo * den).denominator();
    std::int64_t b = (hi * den).numerator() / (hi * den).denominator();
    std::uniform_int_distribution<std::int64_t> pick(a, b);
    while (true) {
      Rational h(pick(rng), den);
      bool ok = open_lo ? (h > lo && h <= hi) : (h >= lo && h < hi);
      if (ok) return h;
    }
  };

  // Case 1
  PathTally case1;
  while (case1.points < static_cast<std::size_t>(config.trials)) {
    ProductPrePoint z = draw();
    const auto& s = z.first.height;
    const auto& t = z.second.height;
    if (!(s <= t) || !(2 * d <= s || t <= 1 - d) || !classify(z, params).in_k()) continue;
    audit_route(z, path_case1(z, params), params, case1);
  }

  // Case 2, including the recursion target check
  PathTally case2;
  std::size_t recursion_ok = 0;
  while (case2.points < static_cast<std::size_t>(config.trials)) {
    ProductPrePoint z = draw();
    z.first.height = uniform_height(Rational(0), 2 * d, false);
    z.second.height = uniform_height(1 - d, Rational(1), true);
    if (!classify(z, params).in_k()) continue;
    ProductPrePoint z0{z.first, CylPoint(z.second.base, 1 - d)};
    if (classify(z0, params).in_k()) ++recursion_ok;
    try {
      audit_route(z, path_case2(z, params), params, case2);
    } catch (const ConsistencyError&) {
      ++case2.points;
      ++case2.contract_failures;
    }
  }

  // t < s: mirrored route plus A5
  PathTally mirrored;
  while (mirrored.points < static_cast<std::size_t>(config.trials)) {
    ProductPrePoint z = draw();
    if (!(z.second.height < z.first.height) || !classify(z, params).in_k()) continue;
    audit_route(z, connect_to_m(z, params), params, mirrored);
  }

  // Heights pinned near the region boundaries
  PathTally boundary;
  {
    const Rational tick = pow2_neg(k);
    std::vector<Rational> anchors{d, 2 * d, 1 - d, 1 - 2 * d, Rational(0), Rational(1, 2), Rational(1)};
    std::vector<Rational> heights;
    for (const auto& a : anchors)
      for (int i : {-1, 0, 1}) {
        Rational h = a + tick * i;
        if (h >= 0 && h <= 1) heights.push_back(h);
      }
    std::uniform_int_distribution<std::size_t> pick(0, heights.size() - 1);
    std::size_t attempts = 0;
    while (boundary.points < static_cast<std::size_t>(config.trials) &&
           attempts < 1000 * static_cast<std::size_t>(config.trials)) {
      ++attempts;
      ProductPrePoint z = draw();
      z.first.height = heights[pick(rng)];
      z.second.height = heights[pick(rng)];
      if (!classify(z, params).in_k()) continue;
      audit_route(z, connect_to_m(z, params), params, boundary);
    }
  }

  // M-to-M segments (claim4_left / claim4_right)
  PathTally claim4;
  std::size_t junction_failures = 0;
  for (int i = 0; i < config.trials; ++i) {
    ProductPrePoint z = draw();
    auto [left, right] = claim4_segment(z.first.base, z.second.base);
    ++claim4.points;
    auto audit = audit_path({left, right}, params, 101);
    claim4.samples += audit.samples;
    claim4.violations += audit.violations.size();
    for (const auto& v : audit.violations)
      if (claim4.examples.size() < 10) claim4.examples.push_back(v);
    if (sigma(left.finish()) != sigma(right.start())) ++junction_failures;
    auto end = sigma(right.finish());
    if (!(end.first == TorusPoint(step(z.first.base), Rational(0))) ||
        !(end.second == TorusPoint(step(z.second.base), Rational(1, 2))))
      ++junction_failures;
  }

  // Bridge along the f x f orbit of a searched seed pair
  auto found = search_product_seed(sys, 100'000, 4, 8, 20'000, config.seed, config.workers);
  CantorPoint p0 = CantorPoint::from_index(sys, *found.first.generator_index(), k);
  CantorPoint q0 = CantorPoint::from_index(sys, *found.second.generator_index(), k);
  const int n_max = 50;
  BridgeChain chain = bridge(p0, q0, n_max);
  auto bridge_audit = audit_path(chain.segments, params, 101);
  bool bridge_chained = route_is_chained(chain.segments, false);
  report.timings["audit_seconds"] = seconds_since(t0);

  report.result["case1"] = case1.to_json();
  report.result["case2"] = case2.to_json();
  report.result["case2_recursion_in_k"] = recursion_ok;
  report.result["mirrored"] = mirrored.to_json();
  report.result["boundary"] = boundary.to_json();
  report.result["claim4"] = claim4.to_json();
  report.result["claim4_junction_failures"] = junction_failures;
  report.result["bridge"] =
      Json{{"n_max", n_max},
           {"seed_a_index", *p0.generator_index()},
           {"seed_b_index", *q0.generator_index()},
           {"samples", bridge_audit.samples},
           {"v0_hits", bridge_audit.violations.size()},
           {"chained", bridge_chained}};

  auto clean = [](const PathTally& t) { return t.violations == 0 && t.contract_failures == 0; };
  add(report, "Case 1 routes stay in K", clean(case1));
  add(report, "Case 2 routes stay in K", clean(case2));
  add(report, "Case 2 recursion target in K for every instance",
      recursion_ok == static_cast<std::size_t>(config.trials));
  add(report, "mirrored routes with A5 stay in K", clean(mirrored));
  add(report, "boundary-pinned routes stay in K", clean(boundary));
  add(report, "claim4 segments stay in K and join after sigma", clean(claim4) && junction_failures == 0);
  add(report, "bridge chain stays in K and is chained", bridge_audit.violations.empty() && bridge_chained);
  return report;
}

Report cmd_arclike(const RunConfig& config) {
  config.validate();
  Report report = new_report("arclike", config);
  auto t0 = Clock::now();
  EpsMap map = EpsMap::build(config.eps);
  const double eps = to_double(config.eps);

  // Fibres on a dense sample with a deep tail.
  CurveSample dense = sample_curve(2001, 15);
  FiberReport fibres = fiber_audit(map, dense.points);
  report.timings["fiber_seconds"] = seconds_since(t0);
  report.result["eps_map"] = Json{{"eps", rational_json(config.eps)},
                                  {"peak_index", map.peak_index()},
                                  {"cut", map.cut()},
                                  {"total_length", map.total_length()}};
  report.result["fibers"] = Json{{"samples", dense.points.size()},
                                 {"buckets", fibres.buckets},
                                 {"pairs", fibres.pairs},
                                 {"max_diameter", fibres.max_diameter},
                                 {"min_value", fibres.min_value},
                                 {"max_value", fibres.max_value},
                                 {"max_value_gap", fibres.max_value_gap}};
  add(report, "max fibre diameter < eps over >= 1e5 bucketed pairs",
      fibres.max_diameter < eps && fibres.pairs >= 100'000);

  // Swapped-endpoint chains on the nerve used by the product demo.
  auto t1 = Clock::now();
  Rational mesh = config.eta / 4;
  auto n = static_cast<std::size_t>(std::ceil(2.0 / to_double(mesh))) + 1;
  int tail = 0;
  while (peak_x(tail) > 0.8 * (2.0 / static_cast<double>(n - 1))) ++tail;
  CurveSample nerve = sample_curve(n, tail);
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(nerve.points.size() - 1));
  const int chains = 1000;
  int witnessed = 0;
  double worst_distance = 0.0;
  double worst_excess = -1.0;
  std::ostringstream witness_csv;
  witness_csv << "chain,x1,y1,x2,y2,distance,bound\n";
  witness_csv.precision(12);
  for (int c = 0; c < chains; ++c) {
    std::uint32_t p = pick(rng), q = pick(rng);
    while (q == p) q = pick(rng);
    DiscreteChain chain = random_swap_chain(nerve, p, q, rng, c % 4 == 0);
    ObstructionWitness w = diagonal_obstruction(chain, map);
    double bound = eps + 2.0 * chain.mesh;
    if (w.distance < bound) ++witnessed;
    worst_distance = std::max(worst_distance, w.distance);
    worst_excess = std::max(worst_excess, w.distance - bound);
    const auto& [a, b] = chain.points[w.index];
    witness_csv << c << ',' << a.x << ',' << a.y << ',' << b.x << ',' << b.y << ',' << w.distance
                << ',' << bound << '\n';
  }
  report.timings["chain_seconds"] = seconds_since(t1);
  report.result["chains"] = Json{{"count", chains},
                                 {"witnessed_within_bound", witnessed},
                                 {"max_witness_distance", worst_distance},
                                 {"max_excess_over_bound", worst_excess},
                                 {"nerve_nodes", nerve.points.size()},
                                 {"nerve_mesh", nerve.mesh}};
  add(report, "every swapped chain has a witness within eps + 2 mesh", witnessed == chains);

  auto t2 = Clock::now();
  ArcSeparationReport demo = separation_demo(config.eta, mesh, 200, config.seed);
  report.timings["demo_seconds"] = seconds_since(t2);
  std::size_t largest = demo.components.sizes.empty()
                            ? 0
                            : *std::max_element(demo.components.sizes.begin(), demo.components.sizes.end());
  report.result["product_demo"] = Json{{"eta", demo.eta},
                                       {"mesh", demo.mesh},
                                       {"curve_nodes", demo.curve_nodes},
                                       {"allowed_nodes", demo.components.nodes},
                                       {"edges", demo.components.edges},
                                       {"components", demo.components.components},
                                       {"largest_component", largest},
                                       {"pairs_tested", demo.pairs_tested},
                                       {"pairs_separated", demo.pairs_separated},
                                       {"sign_violations", demo.sign_violations}};
  add(report, "arc-like product probe has >= 2 components and separates (p,q) from (q,p)",
      demo.components.components >= 2 && demo.pairs_tested > 0 &&
          demo.pairs_separated == demo.pairs_tested);

  // Contrast: the same probe on the mapping-torus product net.
  auto t3 = Clock::now();
  auto sys = SubshiftSystem::create(SystemKind::chacon, 0, config.seed);
  const std::size_t base_budget = isqrt(config.max_nodes);
  auto net = NetGraph::build(sys, config.depth, config.levels, base_budget);
  auto params = SeparationParams::derive(net, config.delta);
  auto pnet = ProductNet::build(net, config.theta.value_or(default_theta(net)), params, config.max_nodes);
  std::uniform_int_distribution<NetGraph::Node> pick_node(0, static_cast<NetGraph::Node>(net.node_count() - 1));
  const std::int64_t min_gap = (config.eta * net.unit()).numerator() / (config.eta * net.unit()).denominator() + 1;
  int probes = 0, connected = 0;
  std::size_t longest = 0;
  while (probes < 3) {
    NetGraph::Node x = pick_node(rng), y = pick_node(rng);
    if (net.raw_distance(x, y) < min_gap) continue;
    ++probes;
    auto res = cw_connect_probe(pnet, pnet.node(x, y), pnet.node(y, x), config.eta);
    if (res.connected) ++connected;
    longest = std::max(longest, res.path.size());
  }
  report.timings["contrast_seconds"] = seconds_since(t3);
  report.result["mapping_torus_contrast"] = Json{{"depth", config.depth},
                                                 {"levels", config.levels},
                                                 {"probes", probes},
                                                 {"connected", connected},
                                                 {"longest_path", longest}};
  add(report, "mapping-torus probe connects sigma(p,q) to sigma(q,p)", connected == probes);

  std::ostringstream curve_csv;
  write_curve_csv(curve_csv, map, nerve.points);
  report.side_files["curve.csv"] = curve_csv.str();
  report.side_files["witnesses.csv"] = witness_csv.str();
  return report;
}

}  // namespace ctl
