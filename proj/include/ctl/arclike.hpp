#pragma once

// The sin(1/x)-curve W = {(x, sin(1/x)) : 0 < x <= 1} u ({0} x [-1,1]) as a
// concrete arc-like continuum: an explicit eps-map onto [0,1], audits of its
// fibres, the sign-change obstruction for chains from (p,q) to (q,p) in W^2,
// and a discrete check that W^2 minus a neighbourhood of the diagonal
// separates (p,q) from (q,p).

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "ctl/graph_approx.hpp"
#include "ctl/rational.hpp"

namespace ctl {

/// Slack on every on-curve comparison.
inline constexpr double kCurveTolerance = 1e-9;

struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
  /// On {0} x [-1,1] rather than on the ray part.
  bool remainder = false;
};

bool on_curve(const PlanarPoint& pt);
double planar_distance(const PlanarPoint& a, const PlanarPoint& b);

/// Arc length of the ray part from (1, sin 1) down to x, tabulated in u = 1/x.
class CurveLength {
 public:
  explicit CurveLength(double x_min);

  double x_min() const { return 1.0 / u_max_; }
  /// Arc length from x = 1 to x (x in [x_min, 1]).
  double length_to(double x) const;
  /// Inverse of length_to.
  double x_at(double length) const;
  double total() const { return cumulative_.back(); }

 private:
  double u_max_;
  double du_;
  std::vector<double> cumulative_;
};

/// x at the N-th peak of sin(1/x): 1 / (2 pi N + pi/2).
double peak_x(int n);

struct CurveSample {
  /// Ray points from (1, sin 1) down to the peak at x_min, then the remainder
  /// from (0,-1) to (0,1).
  std::vector<PlanarPoint> points;
  std::size_t ray_count = 0;
  double mesh = 0.0;
  double x_min = 0.0;
  int tail_depth = 0;
  /// Nerve of the sample: consecutive ray points, consecutive remainder points,
  /// and ray points with x <= mesh linked to remainder points within mesh.
  std::vector<std::vector<std::uint32_t>> adjacency;
};

/// `n` >= 2 remainder samples (mesh 2/(n-1)); the ray is sampled by arc
/// length at the same mesh down to the peak with index `tail_depth`.
CurveSample sample_curve(std::size_t n, int tail_depth);

/// Piecewise eps-map. On the slab {x <= cut} the value depends on y only; on
/// {x >= cut} it follows arc length, so value = pseudo_length / total with
/// pseudo_length = y + 1 on the slab and 2 + arc(cut -> x) beyond it.
class EpsMap {
 public:
  /// Requires 0 < eps < 1/2; picks the least N with cut + eps/2 < eps.
  static EpsMap build(const Rational& eps);

  const Rational& eps() const { return eps_; }
  int peak_index() const { return peak_; }
  double cut() const { return cut_; }
  /// 2 + arc length of the ray from cut to 1.
  double total_length() const { return total_; }

  double pseudo_length(const PlanarPoint& pt) const;
  /// The two pieces of pseudo_length; they agree at (cut, 1).
  double slab_pseudo_length(double y) const { return y + 1.0; }
  double arc_pseudo_length(double x) const;
  double value(const PlanarPoint& pt) const { return pseudo_length(pt) / total_; }
  /// Width of value buckets: pseudo length eps/2.
  double bucket_width() const { return to_double(eps_) / 2.0 / total_; }

 private:
  Rational eps_;
  int peak_ = 0;
  double cut_ = 0.0;
  double total_ = 0.0;
  double cut_length_ = 0.0;
  std::shared_ptr<const CurveLength> length_;
};

struct FiberReport {
  std::size_t buckets = 0;
  std::size_t pairs = 0;
  double max_diameter = 0.0;
  std::size_t worst_bucket = 0;
  /// Largest gap between consecutive sorted values, and the value range.
  double max_value_gap = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
};

/// Bucket samples by floor(value / bucket_width) and measure the largest
/// planar distance inside a bucket.
FiberReport fiber_audit(const EpsMap& map, const std::vector<PlanarPoint>& samples);

/// Largest value gap across an edge of the sample nerve.
double continuity_modulus(const EpsMap& map, const CurveSample& sample);

struct DiscreteChain {
  std::vector<std::pair<PlanarPoint, PlanarPoint>> points;
  double mesh = 0.0;
};

/// Computes the mesh as the largest single-coordinate move between steps.
DiscreteChain make_chain(std::vector<std::pair<PlanarPoint, PlanarPoint>> points);

struct ObstructionWitness {
  std::size_t index = 0;
  double g = 0.0;
  /// Planar distance between the two coordinates at the witness.
  double distance = 0.0;
};

/// First index where g_i = value(x_i) - value(y_i) vanishes or changes sign
/// (the smaller |g| of the straddling pair). Throws DomainError unless the
/// chain runs from (p,q) to (q,p) with p != q.
ObstructionWitness diagonal_obstruction(const DiscreteChain& chain, const EpsMap& map);

/// Chain over the sample nerve from (p,q) to (q,p). Plain chains route each
/// coordinate through a random waypoint and interleave the moves at random;
/// adversarial chains move both coordinates along one path in opposite
/// directions so that they pass close to the diagonal.
DiscreteChain random_swap_chain(const CurveSample& sample, std::uint32_t p, std::uint32_t q,
                                std::mt19937_64& rng, bool adversarial);

struct ArcSeparationReport {
  ComponentReport components;
  double eta = 0.0;
  double mesh = 0.0;
  std::size_t curve_nodes = 0;
  std::size_t pairs_tested = 0;
  std::size_t pairs_separated = 0;
  /// Allowed nodes whose sign of g differs from their component's first node.
  std::size_t sign_violations = 0;
};

/// Cartesian product of the sample nerve with itself, minus the nodes whose
/// coordinates are closer than eta; `pairs` random (p,q) with d(p,q) > 2 eta
/// are tested for (p,q) and (q,p) lying in different components.
/// Requires eta > mesh > 0.
ArcSeparationReport separation_demo(const Rational& eta, const Rational& mesh, std::size_t pairs,
                                    std::uint64_t seed);

/// CSV rows `x,y,value`.
void write_curve_csv(std::ostream& out, const EpsMap& map, const std::vector<PlanarPoint>& pts);

}  // namespace ctl
