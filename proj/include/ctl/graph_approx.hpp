#pragma once

// Finite model of X^2: pairs of base-net nodes, adjacent when both
// coordinates are within theta in the net distance. Used to check that the
// discretized sigma(K) is connected and sits between the diagonal and its
// eps-hat neighbourhood.

#include <cstdint>
#include <string>
#include <vector>

#include "ctl/quotient.hpp"
#include "ctl/separation.hpp"

namespace ctl {

class ProductNet {
 public:
  using Node = std::uint32_t;

  /// Rejects theta below the base mesh (ParameterError) and more than
  /// `max_nodes` product nodes (ResourceError). `net` must outlive the result.
  static ProductNet build(const NetGraph& net, const Rational& theta,
                          const SeparationParams& params, std::size_t max_nodes = 1u << 22);

  const NetGraph& base() const { return *base_; }
  const Rational& theta() const { return theta_; }
  std::size_t node_count() const { return n_ * n_; }
  Node node(NetGraph::Node a, NetGraph::Node b) const { return static_cast<Node>(a * n_ + b); }
  NetGraph::Node first(Node u) const { return static_cast<NetGraph::Node>(u / n_); }
  NetGraph::Node second(Node u) const { return static_cast<NetGraph::Node>(u % n_); }

  RegionLabel label(Node u) const;
  bool in_k(Node u) const { return labels_[u] == 0; }
  ProductPrePoint representative(Node u) const;
  /// Net distance between the two coordinates of u (in base-net units).
  std::int64_t coordinate_gap(Node u) const { return base_->raw_distance(first(u), second(u)); }

  /// Base nodes within theta of `a`, including `a`, ascending.
  const std::vector<NetGraph::Node>& ball(NetGraph::Node a) const { return balls_[a]; }

  template <typename Fn>
  void for_each_neighbor(Node u, Fn&& fn) const {
    NetGraph::Node a = first(u), b = second(u);
    for (NetGraph::Node x : balls_[a])
      for (NetGraph::Node y : balls_[b]) {
        Node v = node(x, y);
        if (v != u) fn(v);
      }
  }

  /// Number of undirected edges.
  std::size_t edge_count() const;

 private:
  ProductNet() = default;

  const NetGraph* base_ = nullptr;
  Rational theta_;
  std::size_t n_ = 0;
  std::vector<std::vector<NetGraph::Node>> balls_;
  std::vector<std::uint8_t> labels_;  // bit 0: V1, bit 1: V2, bit 2: V3
};

struct ComponentReport {
  std::size_t components = 0;
  /// Per component, ordered by smallest member id.
  std::vector<std::size_t> sizes;
  std::vector<std::uint32_t> representatives;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double seconds = 0.0;
  /// Component index per node; npos for nodes outside the subgraph.
  std::vector<std::uint32_t> labels;

  static constexpr std::uint32_t npos = 0xffffffffu;
};

/// Components of the subgraph induced by K-labelled nodes.
ComponentReport k_components(const ProductNet& pnet);

struct SandwichViolation {
  ProductNet::Node node;
  std::string what;
};

struct SandwichReport {
  std::size_t diagonal_checked = 0;
  std::size_t v0_checked = 0;
  std::vector<SandwichViolation> diagonal_outside_v0;
  std::vector<SandwichViolation> v0_far_from_diagonal;

  bool ok() const { return diagonal_outside_v0.empty() && v0_far_from_diagonal.empty(); }
};

/// (i) every preimage of a diagonal node, including the glued representatives
/// ((w,0),(w',1)) and ((w',1),(w,0)) for w' glued onto w, lies in V0;
/// (ii) every V0 node has net distance < eps-hat between its coordinates.
SandwichReport sandwich_check(const ProductNet& pnet, const SeparationParams& params);

struct ProbeResult {
  bool connected = false;
  std::vector<ProductNet::Node> path;
  /// Sizes of the allowed components containing the two endpoints.
  std::size_t component_a = 0;
  std::size_t component_b = 0;
};

/// Walk from a to b through nodes whose coordinates are at net distance
/// >= eta. Throws DomainError if an endpoint is itself within eta.
ProbeResult cw_connect_probe(const ProductNet& pnet, ProductNet::Node a, ProductNet::Node b,
                             const Rational& eta);

/// 2 * mesh, the default adjacency threshold.
inline Rational default_theta(const NetGraph& net) { return 2 * net.mesh(); }

}  // namespace ctl
