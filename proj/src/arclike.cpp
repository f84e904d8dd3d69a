#include "ctl/arclike.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <ostream>

#include "ctl/errors.hpp"

namespace ctl {

bool on_curve(const PlanarPoint& pt) {
  if (pt.remainder) return std::abs(pt.x) <= kCurveTolerance && std::abs(pt.y) <= 1.0 + kCurveTolerance;
  return pt.x > 0.0 && pt.x <= 1.0 + kCurveTolerance &&
         std::abs(pt.y - std::sin(1.0 / pt.x)) <= kCurveTolerance;
}

double planar_distance(const PlanarPoint& a, const PlanarPoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double peak_x(int n) {
  return 1.0 / (2.0 * std::numbers::pi * n + std::numbers::pi / 2.0);
}

namespace {

// Speed of u -> (1/u, sin u).
double speed(double u) {
  double c = std::cos(u);
  return std::sqrt(1.0 / (u * u * u * u) + c * c);
}

}  // namespace

CurveLength::CurveLength(double x_min) : u_max_(1.0 / x_min) {
  if (!(x_min > 0.0 && x_min < 1.0)) throw ParameterError("curve length needs 0 < x_min < 1");
  auto steps = static_cast<std::size_t>(std::ceil((u_max_ - 1.0) / 1e-4));
  du_ = (u_max_ - 1.0) / static_cast<double>(steps);
  cumulative_.resize(steps + 1, 0.0);
  for (std::size_t i = 0; i < steps; ++i) {
    double a = 1.0 + du_ * static_cast<double>(i);
    double b = a + du_;
    // Simpson on each cell
    double piece = du_ / 6.0 * (speed(a) + 4.0 * speed(0.5 * (a + b)) + speed(b));
    cumulative_[i + 1] = cumulative_[i] + piece;
  }
}

double CurveLength::length_to(double x) const {
  double u = 1.0 / x;
  if (u <= 1.0) return 0.0;
  if (u >= u_max_) return cumulative_.back();
  double pos = (u - 1.0) / du_;
  auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= cumulative_.size()) return cumulative_.back();
  double frac = pos - static_cast<double>(i);
  return cumulative_[i] + frac * (cumulative_[i + 1] - cumulative_[i]);
}

double CurveLength::x_at(double length) const {
  if (length <= 0.0) return 1.0;
  if (length >= cumulative_.back()) return 1.0 / u_max_;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), length);
  auto i = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  double span = cumulative_[i + 1] - cumulative_[i];
  double frac = span > 0.0 ? (length - cumulative_[i]) / span : 0.0;
  double u = 1.0 + du_ * (static_cast<double>(i) + frac);
  return 1.0 / u;
}

CurveSample sample_curve(std::size_t n, int tail_depth) {
  if (n < 2) throw ParameterError("sample_curve needs n >= 2");
  if (tail_depth < 0) throw ParameterError("tail depth must be non-negative");
  CurveSample out;
  out.mesh = 2.0 / static_cast<double>(n - 1);
  out.tail_depth = tail_depth;
  out.x_min = peak_x(tail_depth);
  CurveLength length(out.x_min);
  // Chords never exceed arc length; the small shrink absorbs table rounding.
  double stride = out.mesh * (1.0 - 1e-6);
  for (double s = 0.0; s < length.total(); s += stride) {
    double x = length.x_at(s);
    out.points.push_back({x, std::sin(1.0 / x), false});
  }
  out.points.push_back({out.x_min, std::sin(1.0 / out.x_min), false});
  out.ray_count = out.points.size();

  bool has_zero = false;
  for (std::size_t i = 0; i < n; ++i) {
    double y = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    if (i > 0 && !has_zero && out.points.back().y < 0.0 && y > 0.0) {
      out.points.push_back({0.0, 0.0, true});
      has_zero = true;
    }
    if (y == 0.0) has_zero = true;
    out.points.push_back({0.0, y, true});
  }

  const std::size_t total = out.points.size();
  out.adjacency.resize(total);
  auto link = [&](std::size_t a, std::size_t b) {
    out.adjacency[a].push_back(static_cast<std::uint32_t>(b));
    out.adjacency[b].push_back(static_cast<std::uint32_t>(a));
  };
  for (std::size_t i = 0; i + 1 < out.ray_count; ++i) link(i, i + 1);
  for (std::size_t i = out.ray_count; i + 1 < total; ++i) link(i, i + 1);
  for (std::size_t i = 0; i < out.ray_count; ++i) {
    if (out.points[i].x > out.mesh) continue;
    for (std::size_t j = out.ray_count; j < total; ++j)
      if (planar_distance(out.points[i], out.points[j]) <= out.mesh) link(i, j);
  }
  return out;
}

EpsMap EpsMap::build(const Rational& eps) {
  if (!(eps > 0 && eps < Rational(1, 2))) throw ParameterError("eps-map needs 0 < eps < 1/2");
  double e = to_double(eps);
  constexpr int kMaxPeak = 1 << 20;
  int peak = 0;
  while (peak <= kMaxPeak && !(peak_x(peak) + e / 2.0 < e)) ++peak;
  if (peak > kMaxPeak) throw ParameterError("no peak index gives cut + eps/2 < eps");
  EpsMap map;
  map.eps_ = eps;
  map.peak_ = peak;
  map.cut_ = peak_x(peak);
  map.length_ = std::make_shared<CurveLength>(map.cut_);
  map.cut_length_ = map.length_->total();
  map.total_ = 2.0 + map.cut_length_;
  return map;
}

double EpsMap::arc_pseudo_length(double x) const {
  return 2.0 + (cut_length_ - length_->length_to(x));
}

double EpsMap::pseudo_length(const PlanarPoint& pt) const {
  if (pt.remainder || pt.x <= cut_) return slab_pseudo_length(pt.y);
  return arc_pseudo_length(pt.x);
}

FiberReport fiber_audit(const EpsMap& map, const std::vector<PlanarPoint>& samples) {
  FiberReport report;
  std::map<std::int64_t, std::vector<std::size_t>> buckets;
  std::vector<double> values;
  values.reserve(samples.size());
  const double width = map.bucket_width();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double v = map.value(samples[i]);
    values.push_back(v);
    buckets[static_cast<std::int64_t>(std::floor(v / width))].push_back(i);
  }
  report.buckets = buckets.size();
  for (const auto& [id, members] : buckets) {
    report.pairs += members.size() * (members.size() - 1) / 2;
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        double d = planar_distance(samples[members[a]], samples[members[b]]);
        if (d > report.max_diameter) {
          report.max_diameter = d;
          report.worst_bucket = static_cast<std::size_t>(id);
        }
      }
  }
  std::sort(values.begin(), values.end());
  if (!values.empty()) {
    report.min_value = values.front();
    report.max_value = values.back();
  }
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    report.max_value_gap = std::max(report.max_value_gap, values[i + 1] - values[i]);
  return report;
}

double continuity_modulus(const EpsMap& map, const CurveSample& sample) {
  std::vector<double> values;
  values.reserve(sample.points.size());
  for (const auto& pt : sample.points) values.push_back(map.value(pt));
  double worst = 0.0;
  for (std::size_t a = 0; a < sample.adjacency.size(); ++a)
    for (auto b : sample.adjacency[a]) worst = std::max(worst, std::abs(values[a] - values[b]));
  return worst;
}

DiscreteChain make_chain(std::vector<std::pair<PlanarPoint, PlanarPoint>> points) {
  DiscreteChain chain;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    chain.mesh = std::max(chain.mesh, planar_distance(points[i].first, points[i + 1].first));
    chain.mesh = std::max(chain.mesh, planar_distance(points[i].second, points[i + 1].second));
  }
  chain.points = std::move(points);
  return chain;
}

namespace {

bool same_point(const PlanarPoint& a, const PlanarPoint& b) {
  return a.x == b.x && a.y == b.y && a.remainder == b.remainder;
}

}  // namespace

ObstructionWitness diagonal_obstruction(const DiscreteChain& chain, const EpsMap& map) {
  if (chain.points.size() < 2) throw DomainError("chain needs two endpoints");
  const auto& [p, q] = chain.points.front();
  const auto& [qq, pp] = chain.points.back();
  if (!same_point(p, pp) || !same_point(q, qq)) throw DomainError("chain endpoints are not a swapped pair");
  if (same_point(p, q)) throw DomainError("chain endpoints lie on the diagonal");

  auto g_at = [&](std::size_t i) {
    return map.value(chain.points[i].first) - map.value(chain.points[i].second);
  };
  auto witness = [&](std::size_t i, double g) {
    return ObstructionWitness{i, g, planar_distance(chain.points[i].first, chain.points[i].second)};
  };
  double g = g_at(0);
  for (std::size_t i = 0; i + 1 < chain.points.size(); ++i) {
    if (g == 0.0) return witness(i, g);
    double next = g_at(i + 1);
    if ((g < 0.0) != (next < 0.0) || next == 0.0) {
      return std::abs(g) <= std::abs(next) ? witness(i, g) : witness(i + 1, next);
    }
    g = next;
  }
  throw ConsistencyError("no sign change along a swapped chain");
}

namespace {

std::vector<std::uint32_t> bfs_path(const CurveSample& sample, std::uint32_t from, std::uint32_t to) {
  std::vector<std::uint32_t> parent(sample.points.size(), 0xffffffffu);
  std::deque<std::uint32_t> queue{from};
  parent[from] = from;
  while (!queue.empty() && parent[to] == 0xffffffffu) {
    std::uint32_t u = queue.front();
    queue.pop_front();
    for (auto v : sample.adjacency[u]) {
      if (parent[v] != 0xffffffffu) continue;
      parent[v] = u;
      queue.push_back(v);
    }
  }
  if (parent[to] == 0xffffffffu) throw DomainError("curve sample nerve is disconnected");
  std::vector<std::uint32_t> path;
  for (std::uint32_t u = to;; u = parent[u]) {
    path.push_back(u);
    if (u == from) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<std::uint32_t> via(const CurveSample& sample, std::uint32_t a, std::uint32_t w,
                               std::uint32_t b) {
  auto first = bfs_path(sample, a, w);
  auto second = bfs_path(sample, w, b);
  first.insert(first.end(), second.begin() + 1, second.end());
  return first;
}

}  // namespace

DiscreteChain random_swap_chain(const CurveSample& sample, std::uint32_t p, std::uint32_t q,
                                std::mt19937_64& rng, bool adversarial) {
  std::vector<std::uint32_t> xs, ys;
  if (adversarial) {
    xs = bfs_path(sample, p, q);
    ys.assign(xs.rbegin(), xs.rend());
  } else {
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(sample.points.size() - 1));
    xs = via(sample, p, pick(rng), q);
    ys = via(sample, q, pick(rng), p);
  }
  std::vector<std::pair<PlanarPoint, PlanarPoint>> pts;
  std::size_t i = 0, j = 0;
  pts.emplace_back(sample.points[xs[0]], sample.points[ys[0]]);
  bool turn = false;
  while (i + 1 < xs.size() || j + 1 < ys.size()) {
    bool move_x;
    if (i + 1 >= xs.size()) move_x = false;
    else if (j + 1 >= ys.size()) move_x = true;
    else if (adversarial) move_x = (turn = !turn);
    else move_x = (rng() & 1u) != 0;
    if (move_x) ++i; else ++j;
    pts.emplace_back(sample.points[xs[i]], sample.points[ys[j]]);
  }
  return make_chain(std::move(pts));
}

ArcSeparationReport separation_demo(const Rational& eta, const Rational& mesh, std::size_t pairs,
                                    std::uint64_t seed) {
  if (!(mesh > 0 && eta > mesh)) throw ParameterError("separation demo needs eta > mesh > 0");
  auto t0 = std::chrono::steady_clock::now();
  const double e = to_double(eta);
  auto n = static_cast<std::size_t>(std::ceil(2.0 / to_double(mesh))) + 1;
  double actual_mesh = 2.0 / static_cast<double>(n - 1);
  int tail = 0;
  // Deep enough for the ray to reach within mesh of the remainder.
  while (peak_x(tail) > 0.8 * actual_mesh) ++tail;
  CurveSample sample = sample_curve(n, tail);
  const std::size_t V = sample.points.size();
  EpsMap map = EpsMap::build(eta < Rational(1, 2) ? eta : Rational(49, 100));

  std::vector<double> values(V);
  for (std::size_t i = 0; i < V; ++i) values[i] = map.value(sample.points[i]);
  auto allowed = [&](std::size_t x, std::size_t y) {
    return planar_distance(sample.points[x], sample.points[y]) >= e;
  };

  ArcSeparationReport report;
  report.eta = e;
  report.mesh = actual_mesh;
  report.curve_nodes = V;
  ComponentReport& comp = report.components;
  comp.labels.assign(V * V, ComponentReport::npos);
  std::vector<double> component_sign;
  std::deque<std::uint32_t> queue;
  for (std::size_t start = 0; start < V * V; ++start) {
    if (comp.labels[start] != ComponentReport::npos || !allowed(start / V, start % V)) continue;
    auto id = static_cast<std::uint32_t>(comp.components++);
    comp.sizes.push_back(0);
    comp.representatives.push_back(static_cast<std::uint32_t>(start));
    double sign = values[start / V] - values[start % V];
    comp.labels[start] = id;
    queue.push_back(static_cast<std::uint32_t>(start));
    while (!queue.empty()) {
      std::uint32_t u = queue.front();
      queue.pop_front();
      ++comp.sizes[id];
      ++comp.nodes;
      std::size_t x = u / V, y = u % V;
      double g = values[x] - values[y];
      if ((g < 0.0) != (sign < 0.0) || g == 0.0) ++report.sign_violations;
      auto visit = [&](std::size_t nx, std::size_t ny) {
        if (!allowed(nx, ny)) return;
        ++comp.edges;
        auto v = static_cast<std::uint32_t>(nx * V + ny);
        if (comp.labels[v] != ComponentReport::npos) return;
        comp.labels[v] = id;
        queue.push_back(v);
      };
      for (auto nx : sample.adjacency[x]) visit(nx, y);
      for (auto ny : sample.adjacency[y]) visit(x, ny);
    }
  }
  comp.edges /= 2;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, V - 1);
  std::size_t attempts = 0;
  while (report.pairs_tested < pairs && attempts < 1000 * (pairs + 1)) {
    ++attempts;
    std::size_t p = pick(rng), q = pick(rng);
    if (planar_distance(sample.points[p], sample.points[q]) <= 2.0 * e) continue;
    ++report.pairs_tested;
    if (comp.labels[p * V + q] != comp.labels[q * V + p]) ++report.pairs_separated;
  }
  comp.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

void write_curve_csv(std::ostream& out, const EpsMap& map, const std::vector<PlanarPoint>& pts) {
  out << "x,y,value\n";
  out.precision(12);
  for (const auto& pt : pts) out << pt.x << ',' << pt.y << ',' << map.value(pt) << '\n';
}

}  // namespace ctl
