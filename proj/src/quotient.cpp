#include "ctl/quotient.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <queue>

#include "ctl/errors.hpp"

namespace ctl {

CylPoint::CylPoint(CantorPoint b, Rational h) : base(std::move(b)), height(h) {
  if (height < 0 || height > 1) throw DomainError("cylinder height outside [0,1]");
}

TorusPoint::TorusPoint(CantorPoint b, Rational h) : base(std::move(b)), height(h) {
  if (height < 0 || height >= 1) throw DomainError("torus height outside [0,1)");
}

TorusPoint canonicalize(const CylPoint& x) {
  if (x.height == Rational(1)) return TorusPoint(step(x.base), Rational(0));
  return TorusPoint(x.base, x.height);
}

Rational rho(const CylPoint& a, const CylPoint& b) {
  return cantor_metric(a.base, b.base) + abs_diff(a.height, b.height);
}

std::pair<TorusPoint, TorusPoint> sigma(const ProductPrePoint& z) {
  return {canonicalize(z.first), canonicalize(z.second)};
}

// ---------------------------------------------------------------------------

NetGraph NetGraph::build(SystemPtr system, int depth, int levels, std::size_t max_nodes) {
  if (depth < 1) throw ParameterError("net depth must be >= 1");
  if (levels < 1) throw ParameterError("net levels must be >= 1");
  NetGraph net;
  net.system_ = std::move(system);
  net.depth_ = depth;
  net.levels_ = levels;
  const bool two_sided = net.system_->two_sided();
  int word_length = two_sided ? 2 * depth + 1 : depth;
  net.words_ = &language(net.system_->kind(), word_length);
  if (net.node_count() > max_nodes)
    throw ResourceError("net with " + std::to_string(net.node_count()) +
                        " nodes exceeds budget " + std::to_string(max_nodes));

  const std::size_t W = net.word_count();
  net.word_points_.reserve(W);
  for (std::size_t i = 0; i < W; ++i)
    net.word_points_.push_back(CantorPoint::from_code(net.system_, net.words_->word(i)));

  net.word_metric_.resize(W * W, Rational(0));
  for (std::size_t a = 0; a < W; ++a)
    for (std::size_t b = a + 1; b < W; ++b) {
      Rational d = cantor_metric(net.word_points_[a], net.word_points_[b]);
      net.word_metric_[a * W + b] = d;
      net.word_metric_[b * W + a] = d;
    }

  // Gluing: (w, m) is f applied to [w] at height 0.
  net.merge_.resize(W);
  for (std::size_t a = 0; a < W; ++a) {
    if (two_sided) {
      const Word& w = net.word_points_[a].code();
      for (std::size_t b = 0; b < W; ++b) {
        const Word& v = net.word_points_[b].code();
        if (std::equal(w.begin() + 1, w.end(), v.begin())) net.merge_[a].push_back(b);
      }
    } else {
      CantorPoint image = step(net.word_points_[a]);
      net.merge_[a].push_back(net.words_->index_of(pack(image.code())));
    }
    if (net.merge_[a].empty()) throw ConsistencyError("word without an f-image in the net");
  }

  Rational vstep(1, levels);
  for (std::size_t a = 0; a < W; ++a) {
    for (int i = 0; i + 1 < levels; ++i)
      net.edges_.push_back({net.node(a, i), net.node(a, i + 1), vstep});
    for (std::size_t b : net.merge_[a])
      net.edges_.push_back({net.node(a, levels - 1), net.node(b, 0), vstep});
  }
  for (int i = 0; i < levels; ++i)
    for (std::size_t a = 0; a < W; ++a)
      for (std::size_t b = a + 1; b < W; ++b)
        net.edges_.push_back({net.node(a, i), net.node(b, i), net.word_metric_[a * W + b]});

  net.unit_ = std::lcm(static_cast<std::int64_t>(levels),
                       std::int64_t{1} << (two_sided ? depth : depth - 1));
  net.compute_distances();
  return net;
}

void NetGraph::compute_distances() {
  const std::size_t n = node_count();
  std::vector<std::vector<std::pair<Node, std::int64_t>>> adj(n);
  for (const auto& e : edges_) {
    Rational scaled = e.weight * unit_;
    if (scaled.denominator() != 1) throw ConsistencyError("edge weight not a multiple of the unit");
    adj[e.u].emplace_back(e.v, scaled.numerator());
    adj[e.v].emplace_back(e.u, scaled.numerator());
  }
  dist_.assign(n * n, -1);
  using Item = std::pair<std::int64_t, Node>;
  for (std::size_t src = 0; src < n; ++src) {
    std::int64_t* row = dist_.data() + src * n;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    row[src] = 0;
    pq.emplace(0, static_cast<Node>(src));
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d != row[u]) continue;
      for (auto [v, w] : adj[u]) {
        std::int64_t nd = d + w;
        if (row[v] < 0 || nd < row[v]) {
          row[v] = nd;
          pq.emplace(nd, v);
        }
      }
    }
  }
}

CylPoint NetGraph::representative(Node n) const {
  return CylPoint(word_points_[word_of(n)], Rational(level_of(n), levels_));
}

TorusPoint NetGraph::torus_point(Node n) const {
  return TorusPoint(word_points_[word_of(n)], Rational(level_of(n), levels_));
}

Rational NetGraph::mesh() const {
  return pow2_neg(depth_ - 1) + Rational(1, levels_);
}

Rational NetGraph::word_metric(std::size_t a, std::size_t b) const {
  return word_metric_[a * word_count() + b];
}

Rational NetGraph::node_rho(Node a, Node b) const {
  return word_metric(word_of(a), word_of(b)) +
         Rational(std::abs(level_of(a) - level_of(b)), levels_);
}

NetGraph::Node NetGraph::snap(const TorusPoint& x) const {
  std::size_t best = 0;
  Rational best_d(2);
  for (std::size_t w = 0; w < word_count(); ++w) {
    Rational d = cantor_metric(x.base, word_points_[w]);
    if (d < best_d) {
      best_d = d;
      best = w;
    }
  }
  // nearest i/m, ties toward the lower level
  Rational scaled = x.height * levels_;
  std::int64_t lower = scaled.numerator() / scaled.denominator();
  Rational frac = scaled - lower;
  std::int64_t level = frac > Rational(1, 2) ? lower + 1 : lower;
  if (level == levels_) return snap(canonicalize(CylPoint(word_points_[best], Rational(1))));
  return node(best, static_cast<int>(level));
}

std::optional<Rational> NetGraph::distance(Node a, Node b) const {
  std::int64_t d = raw_distance(a, b);
  if (d < 0) return std::nullopt;
  return Rational(d, unit_);
}

void NetGraph::write_edge_list(std::ostream& out) const {
  out << "nodes " << node_count() << '\n';
  for (Node n = 0; n < node_count(); ++n)
    out << n << ' ' << word_to_string(word_points_[word_of(n)].code()) << ' ' << level_of(n) << '\n';
  out << "edges " << edges_.size() << '\n';
  for (const auto& e : edges_) out << e.u << ' ' << e.v << ' ' << to_string(e.weight) << '\n';
}

std::optional<Rational> quotient_distance(const NetGraph& net, const TorusPoint& a,
                                          const TorusPoint& b) {
  if (a.base.system().kind() != net.system()->kind() ||
      b.base.system().kind() != net.system()->kind())
    throw DomainError("point from a different system than the net");
  return net.distance(net.snap(a), net.snap(b));
}

Rational modulus(const NetGraph& net, const Rational& delta) {
  if (delta <= 0) throw ParameterError("delta must be positive");
  const std::size_t n = net.node_count();
  Rational bound = 2 * delta;
  std::int64_t best = 0;
  for (NetGraph::Node a = 0; a < n; ++a)
    for (NetGraph::Node b = a + 1; b < n; ++b) {
      if (!(net.node_rho(a, b) < bound)) continue;
      std::int64_t d = net.raw_distance(a, b);
      if (d < 0) throw ConsistencyError("net is disconnected");
      best = std::max(best, d);
    }
  return Rational(best, net.unit());
}

}  // namespace ctl
