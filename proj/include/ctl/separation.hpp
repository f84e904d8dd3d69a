#pragma once

// Region decomposition of (C x [0,1])^2 into V1, V2, V3 and the complement K,
// and the explicit path families that connect any point of K to the set
// M = (C x {0}) x (C x {1/2}) inside K.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctl/quotient.hpp"
#include "ctl/rational.hpp"
#include "ctl/symbolic.hpp"

namespace ctl {

class SeparationParams {
 public:
  /// Requires 0 < delta < 1/10.
  explicit SeparationParams(Rational delta, Rational eps_hat = Rational(0));

  const Rational& delta() const { return delta_; }
  /// 3 * modulus(net, delta); zero until derived from a net.
  const Rational& eps_hat() const { return eps_hat_; }

  static SeparationParams derive(const NetGraph& net, const Rational& delta);

 private:
  Rational delta_;
  Rational eps_hat_;
};

struct RegionLabel {
  bool v1 = false;
  bool v2 = false;
  bool v3 = false;

  bool in_v0() const { return v1 || v2 || v3; }
  bool in_k() const { return !in_v0(); }
  /// "K", or the V-sets hit joined by '+', e.g. "V1+V3".
  std::string name() const;
};

RegionLabel classify(const ProductPrePoint& z, const SeparationParams& params);

/// ((p,0),(q,1/2)).
ProductPrePoint m_point(const CantorPoint& p, const CantorPoint& q);

/// Exchange the two coordinates. V1 and K are preserved, V2 and V3 swap.
ProductPrePoint swap_coordinates(const ProductPrePoint& z);

enum class SegmentKind { A1, A2, A3, A5, claim4_left, claim4_right };

std::string_view to_string(SegmentKind kind);

/// One closed-form curve r -> ProductPrePoint, traversed from r_from to r_to.
/// The anchors (p, q, s, t) are read in the swapped frame when `swapped` is
/// set, and the sampled point is swapped back.
struct PathSegment {
  SegmentKind kind;
  CantorPoint p;
  CantorPoint q;
  Rational s;
  Rational t;
  Rational delta;
  Rational r_from;
  Rational r_to;
  bool swapped = false;

  ProductPrePoint at(const Rational& r) const;
  ProductPrePoint start() const { return at(r_from); }
  ProductPrePoint finish() const { return at(r_to); }
};

using Route = std::vector<PathSegment>;

/// Case 1 (s <= t and (2 delta <= s or t <= 1 - delta)): A1 from z down to
/// ((p,0),(q,t-s)), then A2 to ((p,0),(q,1/2)).
Route path_case1(const ProductPrePoint& z, const SeparationParams& params);

/// Case 2 (s <= t, s < 2 delta, 1 - delta < t): A3 up to
/// z0 = ((p,s),(q,1-delta)), then the Case 1 route of z0.
Route path_case2(const ProductPrePoint& z, const SeparationParams& params);

/// Route from z in K to a point whose sigma-image lies in sigma(M).
/// s <= t: Case 1 or 2. t < s: the mirrored route to ((p,1/2),(q,0)) and then
/// A5 to ((p,1),(q,1/2)).
Route connect_to_m(const ProductPrePoint& z, const SeparationParams& params);

/// Left piece ((p,r),(q,1/2+r)) and right piece ((p,1/2+r),(f(q),r)), r in [0,1/2].
std::pair<PathSegment, PathSegment> claim4_segment(const CantorPoint& p, const CantorPoint& q);

struct BridgeChain {
  CantorPoint p0;
  CantorPoint q0;
  int n_max = 0;
  /// Segment n (1-based) occupies entries 2(n-1) and 2(n-1)+1.
  std::vector<PathSegment> segments;
};

/// claim4 segment pairs along the f x f orbit of (p0, q0).
BridgeChain bridge(const CantorPoint& p0, const CantorPoint& q0, int n_max);

struct Violation {
  SegmentKind kind;
  Rational parameter;
  std::string predicate;
};

struct AuditReport {
  std::size_t samples = 0;
  std::vector<Violation> violations;
};

/// Parameters r_from + (r_to - r_from) i / (n - 1), i = 0..n-1.
std::vector<Rational> sample_parameters(const PathSegment& seg, int samples);

AuditReport audit_path(const std::vector<PathSegment>& segments, const SeparationParams& params,
                       int samples_per_segment);

/// Consecutive segments share endpoints after sigma; `exact` demands
/// equality before sigma as well.
bool route_is_chained(const std::vector<PathSegment>& segments, bool exact);

/// Whether sigma(z) lies in sigma(M): some representative has heights (0, 1/2).
bool sigma_in_m(const ProductPrePoint& z);

/// Uniformly random point of (C x [0,1])^2 with generator-backed bases of the
/// given resolution and heights j / height_den.
ProductPrePoint random_product_point(std::mt19937_64& rng, const SystemPtr& system,
                                     int resolution, std::int64_t height_den);

}  // namespace ctl
