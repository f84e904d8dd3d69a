#include <doctest.h>

#include <random>
#include <sstream>

#include "ctl/errors.hpp"
#include "ctl/quotient.hpp"
#include "oracles.hpp"

using namespace ctl;

namespace {

SystemPtr chacon() { return SubshiftSystem::create(SystemKind::chacon, 20000); }

oracle::DistMatrix fw_from_edges(const NetGraph& net) {
  std::vector<std::tuple<int, int, oracle::Q>> edges;
  for (const auto& e : net.edges()) edges.emplace_back(e.u, e.v, e.weight);
  return oracle::floyd_warshall(net.node_count(), edges);
}

}  // namespace

TEST_CASE("canonicalize glues the top to the bottom") {
  auto sys = chacon();
  CantorPoint p = CantorPoint::from_index(sys, 500, 4);
  TorusPoint top = canonicalize(CylPoint(p, Rational(1)));
  CHECK(top.height == Rational(0));
  CHECK(top.base == step(p));
  TorusPoint mid = canonicalize(CylPoint(p, Rational(1, 3)));
  CHECK(mid.base == p);
  CHECK(mid.height == Rational(1, 3));
  CHECK_THROWS_AS(CylPoint(p, Rational(5, 4)), DomainError);
  CHECK_THROWS_AS(TorusPoint(p, Rational(1)), DomainError);
  auto [a, b] = sigma({CylPoint(p, Rational(1)), CylPoint(p, Rational(0))});
  CHECK(a == TorusPoint(step(p), Rational(0)));
  CHECK(b == TorusPoint(p, Rational(0)));
}

TEST_CASE("rho is the sum metric on C x [0,1]") {
  auto sys = chacon();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> idx(10, 15000), h(0, 12);
  for (int i = 0; i < 2000; ++i) {
    CylPoint a(CantorPoint::from_index(sys, idx(rng), 5), Rational(h(rng), 12));
    CylPoint b(CantorPoint::from_index(sys, idx(rng), 5), Rational(h(rng), 12));
    CylPoint c(CantorPoint::from_index(sys, idx(rng), 5), Rational(h(rng), 12));
    CHECK(rho(a, b) == cantor_metric(a.base, b.base) + abs_diff(a.height, b.height));
    CHECK(rho(a, b) == rho(b, a));
    CHECK(rho(a, a) == Rational(0));
    CHECK(rho(a, c) <= rho(a, b) + rho(b, c));
  }
}

TEST_CASE("net sizes and gluing relation") {
  auto full = SubshiftSystem::create(SystemKind::fullshift2);
  auto toy = NetGraph::build(full, 1, 2);
  CHECK(toy.node_count() == 8 * 2);
  CHECK(toy.mesh() == Rational(3, 2));

  auto net = NetGraph::build(chacon(), 3, 8);
  CHECK(net.node_count() == language(SystemKind::chacon, 7).size() * 8);
  CHECK(net.mesh() == Rational(1, 4) + Rational(1, 8));
  for (std::size_t w = 0; w < net.word_count(); ++w) {
    std::string ws = word_to_string(net.words().word(w));
    std::vector<std::size_t> expected;
    for (std::size_t v = 0; v < net.word_count(); ++v) {
      std::string vs = word_to_string(net.words().word(v));
      if (vs.substr(0, vs.size() - 1) == ws.substr(1)) expected.push_back(v);
    }
    auto got = net.merge_map()[w];
    std::sort(got.begin(), got.end());
    CHECK(got == expected);
    CHECK(!got.empty());
  }

  auto odo = NetGraph::build(SubshiftSystem::create(SystemKind::odometer2), 4, 4);
  for (std::size_t w = 0; w < odo.word_count(); ++w) {
    REQUIRE(odo.merge_map()[w].size() == 1);
    std::string ws = word_to_string(odo.words().word(w));
    CHECK(word_to_string(odo.words().word(odo.merge_map()[w][0])) == oracle::odometer_add_one(ws));
  }
  CHECK_THROWS_AS(NetGraph::build(chacon(), 6, 16, 100), ResourceError);
}

TEST_CASE("shortest paths agree with Floyd-Warshall") {
  struct Setup {
    SystemKind kind;
    int k, m;
  };
  for (auto [kind, k, m] : {Setup{SystemKind::fullshift2, 1, 2}, Setup{SystemKind::chacon, 2, 4},
                            Setup{SystemKind::odometer2, 3, 4}}) {
    auto net = NetGraph::build(SubshiftSystem::create(kind), k, m);
    auto fw = fw_from_edges(net);
    for (NetGraph::Node a = 0; a < net.node_count(); ++a)
      for (NetGraph::Node b = 0; b < net.node_count(); ++b) REQUIRE(net.distance(a, b) == fw[a][b]);
  }
}

TEST_CASE("D-hat is a metric bounded by rho on the net") {
  auto net = NetGraph::build(chacon(), 3, 6);
  const auto n = static_cast<NetGraph::Node>(net.node_count());
  for (NetGraph::Node a = 0; a < n; ++a) {
    CHECK(net.distance(a, a) == Rational(0));
    for (NetGraph::Node b = 0; b < n; ++b) {
      auto dab = net.distance(a, b);
      REQUIRE(dab);
      CHECK(dab == net.distance(b, a));
      if (a != b) CHECK(*dab > 0);
      CHECK(*dab <= net.node_rho(a, b));
    }
  }
  std::size_t bad = 0;
  for (NetGraph::Node a = 0; a < n; ++a)
    for (NetGraph::Node b = 0; b < n; ++b)
      for (NetGraph::Node c = 0; c < n; ++c)
        if (net.raw_distance(a, c) > net.raw_distance(a, b) + net.raw_distance(b, c)) ++bad;
  CHECK(bad == 0);
}

TEST_CASE("glued points are close in D-hat") {
  auto net = NetGraph::build(chacon(), 4, 8);
  const Rational step_h(1, 8);
  for (std::size_t w = 0; w < net.word_count(); ++w)
    for (std::size_t v : net.merge_map()[w]) CHECK(*net.distance(net.node(w, 7), net.node(v, 0)) <= step_h);
}

TEST_CASE("chacon nets are connected") {
  for (auto [k, m] : {std::pair{1, 2}, {3, 8}, {5, 32}, {6, 16}, {6, 32}}) {
    auto net = NetGraph::build(chacon(), k, m);
    bool connected = true;
    for (NetGraph::Node b = 0; b < net.node_count(); ++b) connected &= net.raw_distance(0, b) >= 0;
    CHECK(connected);
  }
}

TEST_CASE("snapping") {
  auto net = NetGraph::build(chacon(), 4, 8);
  for (NetGraph::Node a = 0; a < net.node_count(); ++a) CHECK(net.snap(net.torus_point(a)) == a);
  auto sys = net.system();
  CantorPoint p = CantorPoint::from_index(sys, 1234, 6);
  NetGraph::Node s = net.snap(TorusPoint(p, Rational(61, 64)));
  // 61/64 rounds to level 8 = the top, which is glued to f(p) at level 0.
  CHECK(net.level_of(s) == 0);
  CHECK(cantor_metric(net.word_point(net.word_of(s)), step(p)) <= pow2_neg(4));
  CHECK(net.level_of(net.snap(TorusPoint(p, Rational(3, 16)))) == 1);  // tie goes down
  auto d = quotient_distance(net, TorusPoint(p, Rational(0)), TorusPoint(p, Rational(0)));
  CHECK(d == Rational(0));
  auto odo = CantorPoint::from_index(SubshiftSystem::create(SystemKind::odometer2), 3, 4);
  CHECK_THROWS_AS(quotient_distance(net, TorusPoint(odo, Rational(0)), TorusPoint(p, Rational(0))),
                  DomainError);
}

TEST_CASE("modulus matches an exhaustive near-pair scan") {
  auto net = NetGraph::build(chacon(), 6, 16);
  const Rational delta(2, 25);
  Rational worst(0);
  for (NetGraph::Node a = 0; a < net.node_count(); ++a)
    for (NetGraph::Node b = 0; b < net.node_count(); ++b)
      if (net.node_rho(a, b) < 2 * delta) worst = std::max(worst, *net.distance(a, b));
  CHECK(modulus(net, delta) == worst);
  CHECK(worst > 0);
  CHECK(worst < 1);
}

TEST_CASE("refinement shrinks the mesh without breaking connectivity") {
  auto coarse = NetGraph::build(chacon(), 4, 8);
  auto fine = NetGraph::build(chacon(), 5, 16);
  CHECK(fine.mesh() < coarse.mesh());
  const Rational delta(2, 25);
  // D-hat <= rho, so every modulus stays below 2 delta.
  CHECK(modulus(fine, delta) < 2 * delta);
  CHECK(modulus(coarse, delta) < 2 * delta);
  // Every coarse node representative snaps into the fine net within one fine mesh.
  for (NetGraph::Node a = 0; a < coarse.node_count(); ++a) {
    NetGraph::Node f = fine.snap(coarse.torus_point(a));
    CHECK(fine.node_rho(f, f) == Rational(0));
    CHECK(rho(fine.representative(f), coarse.representative(a)) <= fine.mesh());
  }
}

TEST_CASE("edge list dump") {
  auto net = NetGraph::build(SubshiftSystem::create(SystemKind::fullshift2), 1, 2);
  std::ostringstream out;
  net.write_edge_list(out);
  std::istringstream in(out.str());
  std::string tag;
  std::size_t n = 0, e = 0;
  in >> tag >> n;
  CHECK(tag == "nodes");
  CHECK(n == net.node_count());
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t id;
    std::string word;
    int level;
    in >> id >> word >> level;
    CHECK(id == i);
    CHECK(word.size() == 3);
    CHECK(level == net.level_of(static_cast<NetGraph::Node>(i)));
  }
  in >> tag >> e;
  CHECK(tag == "edges");
  CHECK(e == net.edges().size());
}
