#include "ctl/separation.hpp"

#include <algorithm>

#include "ctl/errors.hpp"

namespace ctl {

SeparationParams::SeparationParams(Rational delta, Rational eps_hat)
    : delta_(delta), eps_hat_(eps_hat) {
  if (!(delta_ > 0 && delta_ < Rational(1, 10)))
    throw ParameterError("delta must satisfy 0 < delta < 1/10, got " + to_string(delta_));
  if (eps_hat_ < 0) throw ParameterError("eps-hat must be non-negative");
}

SeparationParams SeparationParams::derive(const NetGraph& net, const Rational& delta) {
  SeparationParams probe(delta);
  return SeparationParams(delta, 3 * modulus(net, probe.delta()));
}

std::string RegionLabel::name() const {
  if (in_k()) return "K";
  std::string out;
  auto add = [&](bool flag, const char* label) {
    if (!flag) return;
    if (!out.empty()) out += '+';
    out += label;
  };
  add(v1, "V1");
  add(v2, "V2");
  add(v3, "V3");
  return out;
}

RegionLabel classify(const ProductPrePoint& z, const SeparationParams& params) {
  const auto& [p, s] = z.first;
  const auto& [q, t] = z.second;
  const Rational& d = params.delta();
  RegionLabel label;
  label.v1 = cantor_metric(p, q) < d && abs_diff(t, s) < d;
  // Height tests first: they are cheap and decide most points.
  label.v2 = s < d && 1 - d < t && cantor_metric(p, step(q)) < d;
  label.v3 = t < d && 1 - d < s && cantor_metric(step(p), q) < d;
  return label;
}

ProductPrePoint m_point(const CantorPoint& p, const CantorPoint& q) {
  return {CylPoint(p, Rational(0)), CylPoint(q, Rational(1, 2))};
}

ProductPrePoint swap_coordinates(const ProductPrePoint& z) {
  return {z.second, z.first};
}

std::string_view to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::A1: return "A1";
    case SegmentKind::A2: return "A2";
    case SegmentKind::A3: return "A3";
    case SegmentKind::A5: return "A5";
    case SegmentKind::claim4_left: return "claim4_left";
    case SegmentKind::claim4_right: return "claim4_right";
  }
  return "?";
}

ProductPrePoint PathSegment::at(const Rational& r) const {
  auto make = [&]() -> ProductPrePoint {
    const Rational one(1);
    const Rational half(1, 2);
    switch (kind) {
      case SegmentKind::A1:
        return {CylPoint(p, r * s), CylPoint(q, r * t + (one - r) * (t - s))};
      case SegmentKind::A2:
        return {CylPoint(p, Rational(0)), CylPoint(q, r * (t - s) + (one - r) * half)};
      case SegmentKind::A3:
        return {CylPoint(p, s), CylPoint(q, r * (one - delta) + (one - r) * t)};
      case SegmentKind::A5:
        return {CylPoint(p, half + r), CylPoint(q, r)};
      case SegmentKind::claim4_left:
        return {CylPoint(p, r), CylPoint(q, half + r)};
      case SegmentKind::claim4_right:
        return {CylPoint(p, half + r), CylPoint(step(q), r)};
    }
    throw ConsistencyError("unknown segment kind");
  };
  ProductPrePoint z = make();
  return swapped ? swap_coordinates(z) : z;
}

namespace {

PathSegment segment(SegmentKind kind, const ProductPrePoint& z, const Rational& delta,
                    Rational from, Rational to) {
  return PathSegment{kind,  z.first.base, z.second.base, z.first.height, z.second.height,
                     delta, from,         to,            false};
}

void require_k(const ProductPrePoint& z, const SeparationParams& params) {
  RegionLabel label = classify(z, params);
  if (!label.in_k()) throw DomainError("point lies in " + label.name() + ", not in K");
}

}  // namespace

Route path_case1(const ProductPrePoint& z, const SeparationParams& params) {
  require_k(z, params);
  const Rational& s = z.first.height;
  const Rational& t = z.second.height;
  const Rational& d = params.delta();
  if (!(s <= t)) throw CaseError("Case 1 needs s <= t");
  if (!(2 * d <= s || t <= 1 - d)) throw CaseError("Case 1 needs 2 delta <= s or t <= 1 - delta");
  Route route;
  route.push_back(segment(SegmentKind::A1, z, d, Rational(1), Rational(0)));
  route.push_back(segment(SegmentKind::A2, z, d, Rational(1), Rational(0)));
  return route;
}

Route path_case2(const ProductPrePoint& z, const SeparationParams& params) {
  require_k(z, params);
  const Rational& s = z.first.height;
  const Rational& t = z.second.height;
  const Rational& d = params.delta();
  if (!(s <= t && s < 2 * d && 1 - d < t))
    throw CaseError("Case 2 needs s <= t, s < 2 delta and 1 - delta < t");
  Route route;
  route.push_back(segment(SegmentKind::A3, z, d, Rational(0), Rational(1)));
  ProductPrePoint z0{z.first, CylPoint(z.second.base, 1 - d)};
  if (!classify(z0, params).in_k()) throw ConsistencyError("Case 2 recursion target left K");
  Route tail = path_case1(z0, params);
  route.insert(route.end(), tail.begin(), tail.end());
  return route;
}

namespace {

Route claim1_route(const ProductPrePoint& z, const SeparationParams& params) {
  const Rational& s = z.first.height;
  const Rational& t = z.second.height;
  const Rational& d = params.delta();
  if (2 * d <= s || t <= 1 - d) return path_case1(z, params);
  return path_case2(z, params);
}

}  // namespace

Route connect_to_m(const ProductPrePoint& z, const SeparationParams& params) {
  require_k(z, params);
  if (z.first.height <= z.second.height) return claim1_route(z, params);
  Route route = claim1_route(swap_coordinates(z), params);
  for (auto& seg : route) seg.swapped = true;
  // ((p,1/2),(q,0)) -> ((p,1),(q,1/2)); sigma of the end is ((f(p),0),(q,1/2)).
  ProductPrePoint anchor{CylPoint(z.first.base, Rational(1, 2)), CylPoint(z.second.base, Rational(0))};
  route.push_back(segment(SegmentKind::A5, anchor, params.delta(), Rational(0), Rational(1, 2)));
  return route;
}

std::pair<PathSegment, PathSegment> claim4_segment(const CantorPoint& p, const CantorPoint& q) {
  ProductPrePoint anchor = m_point(p, q);
  Rational zero(0), half(1, 2);
  return {segment(SegmentKind::claim4_left, anchor, zero, zero, half),
          segment(SegmentKind::claim4_right, anchor, zero, zero, half)};
}

BridgeChain bridge(const CantorPoint& p0, const CantorPoint& q0, int n_max) {
  if (n_max < 1) throw ParameterError("bridge needs at least one segment");
  BridgeChain chain{p0, q0, n_max, {}};
  CantorPoint p = p0;
  CantorPoint q = q0;
  for (int n = 1; n <= n_max; ++n) {
    auto [left, right] = claim4_segment(p, q);
    chain.segments.push_back(std::move(left));
    chain.segments.push_back(std::move(right));
    p = step(p);
    q = step(q);
  }
  return chain;
}

std::vector<Rational> sample_parameters(const PathSegment& seg, int samples) {
  if (samples < 2) throw ParameterError("need at least two samples per segment");
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(samples));
  Rational span = seg.r_to - seg.r_from;
  for (int i = 0; i < samples; ++i) out.push_back(seg.r_from + span * Rational(i, samples - 1));
  return out;
}

AuditReport audit_path(const std::vector<PathSegment>& segments, const SeparationParams& params,
                       int samples_per_segment) {
  AuditReport report;
  for (const auto& seg : segments) {
    for (const Rational& r : sample_parameters(seg, samples_per_segment)) {
      ++report.samples;
      RegionLabel label = classify(seg.at(r), params);
      if (label.in_k()) continue;
      report.violations.push_back({seg.kind, r, label.name()});
    }
  }
  return report;
}

namespace {

bool same_pre_point(const ProductPrePoint& a, const ProductPrePoint& b) {
  return a.first.height == b.first.height && a.second.height == b.second.height &&
         a.first.base == b.first.base && a.second.base == b.second.base;
}

}  // namespace

bool route_is_chained(const std::vector<PathSegment>& segments, bool exact) {
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    ProductPrePoint end = segments[i].finish();
    ProductPrePoint begin = segments[i + 1].start();
    if (exact) {
      if (!same_pre_point(end, begin)) return false;
    } else if (sigma(end) != sigma(begin)) {
      return false;
    }
  }
  return true;
}

bool sigma_in_m(const ProductPrePoint& z) {
  auto [a, b] = sigma(z);
  return a.height == Rational(0) && b.height == Rational(1, 2);
}

ProductPrePoint random_product_point(std::mt19937_64& rng, const SystemPtr& system,
                                     int resolution, std::int64_t height_den) {
  auto make_base = [&]() {
    if (!system->two_sided()) {
      std::uniform_int_distribution<std::int64_t> pick(0, (std::int64_t{1} << 30) - 1);
      return CantorPoint::from_index(system, pick(rng), resolution);
    }
    auto glen = static_cast<std::int64_t>(system->generator().size());
    std::uniform_int_distribution<std::int64_t> pick(resolution + 1, glen - resolution - 2);
    return CantorPoint::from_index(system, pick(rng), resolution);
  };
  std::uniform_int_distribution<std::int64_t> h(0, height_den);
  CantorPoint p = make_base();
  CantorPoint q = make_base();
  // Half the time, move q to another occurrence of p's central window so that
  // near pairs (small Cantor distance) are well represented.
  if (system->two_sided() && (rng() & 1u)) {
    std::uniform_int_distribution<int> radius(0, resolution);
    Word target = p.centred(radius(rng));
    const Word& g = system->generator();
    auto idx = *q.generator_index();
    auto glen = static_cast<std::int64_t>(g.size());
    int r = static_cast<int>(target.size() / 2);
    for (std::int64_t i = idx; i + resolution + 1 < glen; ++i) {
      if (std::equal(target.begin(), target.end(), g.begin() + (i - r))) {
        q = CantorPoint::from_index(system, i, resolution);
        break;
      }
    }
  }
  return {CylPoint(p, Rational(h(rng), height_den)), CylPoint(q, Rational(h(rng), height_den))};
}

}  // namespace ctl
