#pragma once

// C x [0,1], the mapping torus X = C x [0,1] / (p,1) ~ (f(p),0), the quotient
// maps and a computable metric on X given by shortest paths on a finite net
// whose top level is glued to the bottom level through f.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "ctl/rational.hpp"
#include "ctl/symbolic.hpp"

namespace ctl {

struct CylPoint {
  CylPoint(CantorPoint base, Rational height);

  CantorPoint base;
  Rational height;
};

/// Canonical representative of a point of X: height in [0,1).
struct TorusPoint {
  TorusPoint(CantorPoint base, Rational height);

  bool operator==(const TorusPoint& other) const {
    return height == other.height && base == other.base;
  }

  CantorPoint base;
  Rational height;
};

struct ProductPrePoint {
  CylPoint first;
  CylPoint second;
};

/// phi: (p,s) for s < 1, and (f(p), 0) for s = 1.
TorusPoint canonicalize(const CylPoint& x);

/// Lift of a canonical point back to C x [0,1] (height unchanged).
inline CylPoint lift(const TorusPoint& x) { return CylPoint(x.base, x.height); }

/// cantor_metric(p,q) + |s - t|.
Rational rho(const CylPoint& a, const CylPoint& b);

/// sigma = phi x phi.
std::pair<TorusPoint, TorusPoint> sigma(const ProductPrePoint& z);

/// Finite net of X: admissible words of the depth-k window times heights
/// i/m, i < m. Edges: vertical steps of weight 1/m, horizontal edges between
/// distinct words on one level weighted by their Cantor distance, and gluing
/// edges of weight 1/m from (w, m-1) to (w', 0) for every w' compatible with
/// f([w]). Distances are stored exactly as integer multiples of 1/unit().
class NetGraph {
 public:
  using Node = std::uint32_t;

  struct Edge {
    Node u;
    Node v;
    Rational weight;
  };

  static NetGraph build(SystemPtr system, int depth, int levels,
                        std::size_t max_nodes = std::size_t{1} << 16);

  const SystemPtr& system() const { return system_; }
  int depth() const { return depth_; }
  int levels() const { return levels_; }
  /// Net words: length 2k+1 for two-sided systems, k for the odometer.
  const Language& words() const { return *words_; }
  std::size_t word_count() const { return words_->size(); }
  std::size_t node_count() const { return word_count() * static_cast<std::size_t>(levels_); }

  Node node(std::size_t word, int level) const {
    return static_cast<Node>(word * static_cast<std::size_t>(levels_) + static_cast<std::size_t>(level));
  }
  std::size_t word_of(Node n) const { return n / static_cast<std::size_t>(levels_); }
  int level_of(Node n) const { return static_cast<int>(n % static_cast<std::size_t>(levels_)); }

  const CantorPoint& word_point(std::size_t word) const { return word_points_[word]; }
  CylPoint representative(Node n) const;
  TorusPoint torus_point(Node n) const;

  const std::vector<Edge>& edges() const { return edges_; }
  /// For each word w, the words w' whose level-0 nodes are glued to (w, m-1).
  const std::vector<std::vector<std::size_t>>& merge_map() const { return merge_; }

  /// 2^-(k-1) + 1/m.
  Rational mesh() const;
  /// Cantor distance between two net words.
  Rational word_metric(std::size_t a, std::size_t b) const;
  /// rho between node representatives.
  Rational node_rho(Node a, Node b) const;

  /// Nearest word by Cantor distance (ties to the lower index), then the
  /// nearest level (ties toward the lower level). Heights rounding up to 1 are
  /// glued to the f-image at level 0.
  Node snap(const TorusPoint& x) const;

  /// Shortest-path distance in units of 1/unit(); negative when unreachable.
  std::int64_t raw_distance(Node a, Node b) const {
    return dist_[static_cast<std::size_t>(a) * node_count() + b];
  }
  std::int64_t unit() const { return unit_; }
  /// nullopt marks an unreachable pair.
  std::optional<Rational> distance(Node a, Node b) const;

  /// Edge-list dump: `nodes N`, N lines `id word level`, `edges E`, E lines `u v w`.
  void write_edge_list(std::ostream& out) const;

 private:
  NetGraph() = default;
  void compute_distances();

  SystemPtr system_;
  int depth_ = 0;
  int levels_ = 0;
  const Language* words_ = nullptr;
  std::vector<CantorPoint> word_points_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> merge_;
  std::vector<Rational> word_metric_;
  std::int64_t unit_ = 1;
  std::vector<std::int64_t> dist_;
};

/// D-hat: shortest-path distance between snapped nodes; nullopt if unreachable.
std::optional<Rational> quotient_distance(const NetGraph& net, const TorusPoint& a,
                                          const TorusPoint& b);

/// Largest D-hat over node pairs with rho < 2 delta (that is, eps-hat / 3).
Rational modulus(const NetGraph& net, const Rational& delta);

}  // namespace ctl
