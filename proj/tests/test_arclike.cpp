#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "ctl/arclike.hpp"
#include "ctl/errors.hpp"

using namespace ctl;

namespace {

bool has_point(const CurveSample& s, double x, double y) {
  for (const auto& p : s.points)
    if (std::abs(p.x - x) < 1e-12 && std::abs(p.y - y) < 1e-12) return true;
  return false;
}

// Arc length of sin(1/x) between a < b by plain composite trapezoid in x.
double arc_length(double a, double b, int steps) {
  double total = 0.0;
  double h = (b - a) / steps;
  auto speed = [](double x) {
    double d = -std::cos(1.0 / x) / (x * x);
    return std::sqrt(1.0 + d * d);
  };
  for (int i = 0; i < steps; ++i) total += 0.5 * h * (speed(a + i * h) + speed(a + (i + 1) * h));
  return total;
}

}  // namespace

TEST_CASE("curve sample contents and spacing") {
  CurveSample s = sample_curve(41, 3);
  CHECK(has_point(s, 1.0, std::sin(1.0)));
  CHECK(has_point(s, 0.0, -1.0));
  CHECK(has_point(s, 0.0, 0.0));
  CHECK(has_point(s, 0.0, 1.0));
  CHECK(s.mesh == doctest::Approx(2.0 / 40));
  for (const auto& p : s.points) CHECK(on_curve(p));
  CHECK(!on_curve(PlanarPoint{0.5, 0.0, false}));
  CHECK(!on_curve(PlanarPoint{0.0, 1.5, true}));
  for (std::size_t a = 0; a < s.adjacency.size(); ++a)
    for (auto b : s.adjacency[a]) CHECK(planar_distance(s.points[a], s.points[b]) <= s.mesh + kCurveTolerance);
  // consecutive ray samples and consecutive remainder samples
  for (std::size_t i = 1; i < s.ray_count; ++i)
    CHECK(planar_distance(s.points[i - 1], s.points[i]) <= s.mesh + kCurveTolerance);
  CHECK(s.x_min == doctest::Approx(peak_x(3)));
}

TEST_CASE("curve length table") {
  CurveLength len(peak_x(2));
  CHECK(len.length_to(1.0) == doctest::Approx(0.0));
  CHECK(len.length_to(0.3) == doctest::Approx(arc_length(0.3, 1.0, 200000)).epsilon(1e-6));
  CHECK(len.total() == doctest::Approx(arc_length(peak_x(2), 1.0, 2000000)).epsilon(1e-5));
  for (double x : {0.9, 0.5, 0.2, 0.1, 0.075})
    CHECK(len.x_at(len.length_to(x)) == doctest::Approx(x).epsilon(1e-7));
}

TEST_CASE("eps-map construction") {
  EpsMap map = EpsMap::build(Rational(1, 10));
  CHECK(map.peak_index() == 3);
  CHECK(map.cut() == doctest::Approx(peak_x(3)));
  CHECK(map.cut() + 0.05 < 0.1);
  CHECK(peak_x(2) + 0.05 >= 0.1);  // N is the least admissible index
  // junction: both pieces agree at (cut, 1)
  CHECK(map.slab_pseudo_length(1.0) == doctest::Approx(map.arc_pseudo_length(map.cut())).epsilon(1e-12));
  CHECK(map.value(PlanarPoint{0.0, -1.0, true}) == doctest::Approx(0.0));
  CHECK(map.value(PlanarPoint{0.0, 1.0, true}) == doctest::Approx(2.0 / map.total_length()));
  CHECK(map.value(PlanarPoint{1.0, std::sin(1.0), false}) == doctest::Approx(1.0));
  CHECK(map.total_length() ==
        doctest::Approx(2.0 + arc_length(map.cut(), 1.0, 4000000)).epsilon(1e-5));
  CHECK_THROWS_AS(EpsMap::build(Rational(1, 2)), ParameterError);
  CHECK_THROWS_AS(EpsMap::build(Rational(0)), ParameterError);
}

TEST_CASE("fibre audit against a brute-force bucket scan") {
  EpsMap map = EpsMap::build(Rational(1, 10));
  CurveSample s = sample_curve(201, 6);
  FiberReport rep = fiber_audit(map, s.points);
  std::map<long, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < s.points.size(); ++i)
    buckets[static_cast<long>(std::floor(map.value(s.points[i]) / (0.05 / map.total_length())))].push_back(i);
  double worst = 0.0;
  std::size_t pairs = 0;
  for (const auto& [id, m] : buckets)
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = a + 1; b < m.size(); ++b) {
        ++pairs;
        worst = std::max(worst, std::hypot(s.points[m[a]].x - s.points[m[b]].x, s.points[m[a]].y - s.points[m[b]].y));
      }
  CHECK(rep.buckets == buckets.size());
  CHECK(rep.pairs == pairs);
  CHECK(rep.max_diameter == doctest::Approx(worst));
  CHECK(rep.max_diameter < 0.1);
  CHECK(rep.max_diameter <= map.cut() + 0.05 + kCurveTolerance);
  // single-point buckets have diameter 0
  FiberReport one = fiber_audit(map, {PlanarPoint{0.0, 0.0, true}});
  CHECK(one.max_diameter == 0.0);
  CHECK(one.pairs == 0);
}

TEST_CASE("fibre audit on a dense sample") {
  EpsMap map = EpsMap::build(Rational(1, 10));
  CurveSample s = sample_curve(2001, 15);
  FiberReport rep = fiber_audit(map, s.points);
  CHECK(rep.pairs >= 100000);
  CHECK(rep.max_diameter < 0.1);
  CHECK(rep.min_value == doctest::Approx(0.0));
  CHECK(rep.max_value == doctest::Approx(1.0));
  CHECK(rep.max_value_gap < map.bucket_width());  // onto up to the value grid
}

TEST_CASE("continuity modulus shrinks with the mesh") {
  EpsMap map = EpsMap::build(Rational(1, 10));
  double coarse = continuity_modulus(map, sample_curve(81, 8));
  double fine = continuity_modulus(map, sample_curve(321, 8));
  CHECK(fine < coarse);
  CHECK(fine < 0.01);
}

TEST_CASE("obstruction witness") {
  EpsMap map = EpsMap::build(Rational(1, 10));
  PlanarPoint p{0.0, -0.5, true}, q{1.0, std::sin(1.0), false};
  DiscreteChain two = make_chain({{p, q}, {q, p}});
  auto w = diagonal_obstruction(two, map);
  double g0 = map.value(p) - map.value(q);
  CHECK(w.index <= 1);
  CHECK(std::abs(w.g) == doctest::Approx(std::abs(g0)));
  CHECK_THROWS_AS(diagonal_obstruction(make_chain({{p, q}, {p, q}}), map), DomainError);
  CHECK_THROWS_AS(diagonal_obstruction(make_chain({{p, p}, {p, p}}), map), DomainError);
}

TEST_CASE("random swapped chains always have a witness near the diagonal") {
  EpsMap map = EpsMap::build(Rational(1, 10));
  CurveSample s = sample_curve(161, 16);  // tail reaches below 0.8 mesh
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(s.points.size() - 1));
  int ok = 0;
  for (int c = 0; c < 1000; ++c) {
    std::uint32_t a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    DiscreteChain chain = random_swap_chain(s, a, b, rng, c % 4 == 0);
    REQUIRE(chain.points.size() >= 2);
    // mesh is the largest single-coordinate move
    double mu = 0.0;
    for (std::size_t i = 1; i < chain.points.size(); ++i)
      mu = std::max({mu, planar_distance(chain.points[i - 1].first, chain.points[i].first),
                     planar_distance(chain.points[i - 1].second, chain.points[i].second)});
    CHECK(chain.mesh == doctest::Approx(mu));
    auto w = diagonal_obstruction(chain, map);
    // first sign change, recomputed
    std::size_t first = 0;
    double g = map.value(chain.points[0].first) - map.value(chain.points[0].second);
    for (std::size_t i = 1; i < chain.points.size(); ++i) {
      double h = map.value(chain.points[i].first) - map.value(chain.points[i].second);
      if (g == 0.0 || (g < 0.0) != (h < 0.0) || h == 0.0) break;
      first = i;
      g = h;
    }
    CHECK((w.index == first || w.index == first + 1));
    if (w.distance < 0.1 + 2 * chain.mesh) ++ok;
  }
  CHECK(ok == 1000);
}

TEST_CASE("product probe separates swapped pairs") {
  auto rep = separation_demo(Rational(1, 20), Rational(1, 80), 50, 1);
  CHECK(rep.mesh <= 0.0125);
  CHECK(rep.components.components >= 2);
  CHECK(rep.pairs_tested == 50);
  CHECK(rep.pairs_separated == 50);
  CHECK(rep.sign_violations == 0);
  CHECK_THROWS_AS(separation_demo(Rational(1, 80), Rational(1, 20), 5, 0), ParameterError);
}

TEST_CASE("curve csv") {
  EpsMap map = EpsMap::build(Rational(1, 10));
  CurveSample s = sample_curve(5, 1);
  std::ostringstream out;
  write_curve_csv(out, map, s.points);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y,value");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == s.points.size());
}
