#include "ctl/graph_approx.hpp"

#include <algorithm>
#include <chrono>
#include <deque>

#include "ctl/disjoint_set.hpp"
#include "ctl/errors.hpp"

namespace ctl {

namespace {

// Largest integer count of net units not exceeding x.
std::int64_t floor_units(const Rational& x, std::int64_t unit) {
  Rational scaled = x * unit;
  std::int64_t q = scaled.numerator() / scaled.denominator();
  if (scaled.numerator() < 0 && q * scaled.denominator() != scaled.numerator()) --q;
  return q;
}

// Smallest integer count of net units not below x.
std::int64_t ceil_units(const Rational& x, std::int64_t unit) {
  Rational scaled = x * unit;
  std::int64_t q = floor_units(x, unit);
  return q * scaled.denominator() == scaled.numerator() ? q : q + 1;
}

}  // namespace

ProductNet ProductNet::build(const NetGraph& net, const Rational& theta,
                             const SeparationParams& params, std::size_t max_nodes) {
  if (theta < net.mesh())
    throw ParameterError("theta " + to_string(theta) + " below the net mesh " + to_string(net.mesh()));
  ProductNet pnet;
  pnet.base_ = &net;
  pnet.theta_ = theta;
  pnet.n_ = net.node_count();
  if (pnet.n_ * pnet.n_ > max_nodes)
    throw ResourceError("product net with " + std::to_string(pnet.n_ * pnet.n_) +
                        " nodes exceeds budget " + std::to_string(max_nodes));

  std::int64_t reach = floor_units(theta, net.unit());
  pnet.balls_.resize(pnet.n_);
  for (NetGraph::Node a = 0; a < pnet.n_; ++a)
    for (NetGraph::Node b = 0; b < pnet.n_; ++b) {
      std::int64_t d = net.raw_distance(a, b);
      if (d >= 0 && d <= reach) pnet.balls_[a].push_back(b);
    }

  std::vector<CylPoint> reps;
  reps.reserve(pnet.n_);
  for (NetGraph::Node a = 0; a < pnet.n_; ++a) reps.push_back(net.representative(a));
  pnet.labels_.resize(pnet.node_count());
  for (NetGraph::Node a = 0; a < pnet.n_; ++a)
    for (NetGraph::Node b = 0; b < pnet.n_; ++b) {
      RegionLabel l = classify({reps[a], reps[b]}, params);
      pnet.labels_[pnet.node(a, b)] =
          static_cast<std::uint8_t>((l.v1 ? 1 : 0) | (l.v2 ? 2 : 0) | (l.v3 ? 4 : 0));
    }
  return pnet;
}

RegionLabel ProductNet::label(Node u) const {
  std::uint8_t bits = labels_[u];
  return RegionLabel{(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0};
}

ProductPrePoint ProductNet::representative(Node u) const {
  return {base_->representative(first(u)), base_->representative(second(u))};
}

std::size_t ProductNet::edge_count() const {
  std::size_t directed = 0;
  for (NetGraph::Node a = 0; a < n_; ++a)
    for (NetGraph::Node b = 0; b < n_; ++b) directed += balls_[a].size() * balls_[b].size() - 1;
  return directed / 2;
}

ComponentReport k_components(const ProductNet& pnet) {
  auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = pnet.node_count();
  DisjointSet dsu(n);
  ComponentReport report;
  for (ProductNet::Node u = 0; u < n; ++u) {
    if (!pnet.in_k(u)) continue;
    ++report.nodes;
    pnet.for_each_neighbor(u, [&](ProductNet::Node v) {
      if (v > u && pnet.in_k(v)) {
        ++report.edges;
        dsu.unite(u, v);
      }
    });
  }
  // Number components in order of their smallest member.
  report.labels.assign(n, ComponentReport::npos);
  std::vector<std::uint32_t> root_label(n, ComponentReport::npos);
  for (ProductNet::Node u = 0; u < n; ++u) {
    if (!pnet.in_k(u)) continue;
    std::uint32_t r = dsu.find(u);
    if (root_label[r] == ComponentReport::npos) {
      root_label[r] = static_cast<std::uint32_t>(report.components++);
      report.sizes.push_back(0);
      report.representatives.push_back(u);
    }
    report.labels[u] = root_label[r];
    ++report.sizes[root_label[r]];
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

SandwichReport sandwich_check(const ProductNet& pnet, const SeparationParams& params) {
  const NetGraph& net = pnet.base();
  SandwichReport report;
  for (NetGraph::Node x = 0; x < net.node_count(); ++x) {
    ProductNet::Node u = pnet.node(x, x);
    ++report.diagonal_checked;
    if (!pnet.label(u).in_v0()) report.diagonal_outside_v0.push_back({u, "(x,x) not in V0"});
    if (net.level_of(x) != 0) continue;
    // x = (w,0) is also phi(w',1) for every w' glued onto w.
    std::size_t w = net.word_of(x);
    CylPoint low = net.representative(x);
    for (std::size_t wp = 0; wp < net.word_count(); ++wp) {
      const auto& images = net.merge_map()[wp];
      if (std::find(images.begin(), images.end(), w) == images.end()) continue;
      CylPoint high(net.word_point(wp), Rational(1));
      report.diagonal_checked += 2;
      if (!classify({low, high}, params).v2)
        report.diagonal_outside_v0.push_back({u, "((w,0),(w',1)) not in V2"});
      if (!classify({high, low}, params).v3)
        report.diagonal_outside_v0.push_back({u, "((w',1),(w,0)) not in V3"});
    }
  }
  std::int64_t bound_units = ceil_units(params.eps_hat(), net.unit());
  for (ProductNet::Node u = 0; u < pnet.node_count(); ++u) {
    if (pnet.in_k(u)) continue;
    ++report.v0_checked;
    std::int64_t d = pnet.coordinate_gap(u);
    // d / unit < eps_hat  <=>  d < ceil(eps_hat * unit)
    if (d < 0 || d >= bound_units)
      report.v0_far_from_diagonal.push_back(
          {u, pnet.label(u).name() + " node at distance " +
                  (d < 0 ? std::string("inf") : to_string(Rational(d, net.unit())))});
  }
  return report;
}

ProbeResult cw_connect_probe(const ProductNet& pnet, ProductNet::Node a, ProductNet::Node b,
                             const Rational& eta) {
  const std::int64_t unit = pnet.base().unit();
  const std::int64_t min_gap = ceil_units(eta, unit);
  auto allowed = [&](ProductNet::Node u) {
    std::int64_t d = pnet.coordinate_gap(u);
    return d < 0 || d >= min_gap;
  };
  if (!allowed(a) || !allowed(b)) throw DomainError("probe endpoint within eta of the diagonal");

  const std::size_t n = pnet.node_count();
  constexpr std::uint32_t unseen = 0xffffffffu;
  auto flood = [&](ProductNet::Node src, std::vector<std::uint32_t>& parent) {
    std::size_t size = 0;
    std::deque<ProductNet::Node> queue{src};
    parent[src] = src;
    while (!queue.empty()) {
      ProductNet::Node u = queue.front();
      queue.pop_front();
      ++size;
      pnet.for_each_neighbor(u, [&](ProductNet::Node v) {
        if (parent[v] != unseen || !allowed(v)) return;
        parent[v] = u;
        queue.push_back(v);
      });
    }
    return size;
  };

  ProbeResult result;
  std::vector<std::uint32_t> parent(n, unseen);
  result.component_a = flood(a, parent);
  if (parent[b] != unseen) {
    result.connected = true;
    result.component_b = result.component_a;
    for (ProductNet::Node u = b;; u = parent[u]) {
      result.path.push_back(u);
      if (u == a) break;
    }
    std::reverse(result.path.begin(), result.path.end());
    return result;
  }
  std::vector<std::uint32_t> other(n, unseen);
  result.component_b = flood(b, other);
  return result;
}

}  // namespace ctl
