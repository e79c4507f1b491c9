#include "digitlens/manifold.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace digitlens;

namespace {

Box box2(double x0, double x1, double y0, double y1) {
  Box b;
  b.n = 2;
  b.lo = {x0, y0, 0, 0};
  b.hi = {x1, y1, 0, 0};
  return b;
}

Box point_box(std::span<const double> x) {
  Box b;
  b.n = static_cast<int>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) b.lo[i] = b.hi[i] = x[i];
  return b;
}

// Distance to a curve by dense parameter sampling (an upper bound on the true distance).
double sampled_distance(const ManifoldSpec& m, std::span<const double> x) {
  double best = INFINITY;
  const int N = 200000;
  auto consider = [&](std::array<double, 4> q) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - q[i]) * (x[i] - q[i]);
    best = std::min(best, std::sqrt(s));
  };
  const auto& sh = m.shape();
  for (int i = 0; i <= N; ++i) {
    const double u = static_cast<double>(i) / N;
    if (const auto* c = std::get_if<Sphere>(&sh)) {
      const double a = 2 * std::numbers::pi * u;
      consider({c->center[0] + c->radius * std::cos(a), c->center[1] + c->radius * std::sin(a)});
    } else if (const auto* se = std::get_if<Superellipse>(&sh)) {
      const double a = 2 * std::numbers::pi * u;
      const double cs = std::cos(a), sn = std::sin(a);
      const double x0 = std::copysign(std::pow(std::abs(cs), 2.0 / se->k), cs);
      const double y0 = std::copysign(std::pow(std::abs(sn), 2.0 / se->k), sn);
      consider({x0, 1.0 + y0});
    } else if (const auto* h = std::get_if<Hyperbola>(&sh)) {
      const double t = std::exp(-8.0 + 16.0 * u);
      consider({t, h->r / t});
    } else if (const auto* v = std::get_if<Veronese>(&sh)) {
      const double t = v->t0 + (v->t1 - v->t0) * u;
      std::array<double, 4> q{};
      double pw = 1;
      for (int j = 0; j < v->n; ++j) q[static_cast<std::size_t>(j)] = (pw *= t);
      consider(q);
    } else if (const auto* s = std::get_if<Segment>(&sh)) {
      std::array<double, 4> q{};
      for (std::size_t j = 0; j < s->a.size(); ++j) q[j] = s->a[j] + u * (s->b[j] - s->a[j]);
      consider(q);
    }
  }
  return best;
}

std::vector<ManifoldSpec> curves() {
  return {ManifoldSpec::circle({0.5, 0.5}, 0.4), ManifoldSpec::superellipse(2), ManifoldSpec::superellipse(3),
          ManifoldSpec::superellipse(4.5), ManifoldSpec::hyperbola(0.3), ManifoldSpec::veronese(2, -0.5, 1.0),
          ManifoldSpec::veronese(3), ManifoldSpec::segment({0.5, 0.0}, {0.5, 1.0})};
}

}  // namespace

TEST_CASE("distance interval examples") {
  const auto unit = ManifoldSpec::circle({0, 0}, 1);
  auto d = distance_interval(unit, box2(1, 1, 0, 0));
  CHECK(d.lo == doctest::Approx(0.0));
  CHECK(d.hi == doctest::Approx(0.0));
  d = distance_interval(unit, box2(2, 3, 0, 0));
  CHECK(d.lo == doctest::Approx(1.0));
  CHECK(d.hi == doctest::Approx(2.0));
  d = distance_interval(ManifoldSpec::hyperbola(1), box2(1, 1, 1, 1));
  CHECK(d.lo == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(d.hi <= 1e-6);
  CHECK(cell_vs_neighborhood(ManifoldSpec::segment({0.5, 0}, {0.5, 1}), 0.1, box2(0, 0.25, 0, 0.25)) ==
        Relation::outside);
  CHECK(cell_vs_neighborhood(unit, 10.0, box2(0, 1, 0, 1)) == Relation::inside);
}

TEST_CASE("sigma defaults and validation") {
  CHECK(ManifoldSpec::circle({0, 0}, 1).sigma() == doctest::Approx(0.5));
  CHECK(ManifoldSpec::circle({0, 0, 0}, 1).sigma() == doctest::Approx(1.0));
  CHECK(ManifoldSpec::veronese(3).sigma() == doctest::Approx(1.0 / 3));
  CHECK(ManifoldSpec::superellipse(4).sigma() == doctest::Approx(0.25));
  CHECK(ManifoldSpec::circle({0, 0}, 1, 0.3).sigma() == doctest::Approx(0.3));
  CHECK(ManifoldSpec::veronese(3).dim() == 1);
  CHECK(ManifoldSpec::circle({0, 0, 0}, 1).dim() == 2);
  CHECK_THROWS_AS(ManifoldSpec::circle({0, 0}, -1), Error);
  CHECK_THROWS_AS(ManifoldSpec::circle({0, 0}, 1, -0.5), Error);
  CHECK_THROWS_AS(ManifoldSpec::superellipse(0.5), Error);
}

TEST_CASE("distance enclosures contain sampled distances") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.2, 1.2), w(0.0, 0.2);
  for (const auto& m : curves()) {
    const int n = m.ambient_dim();
    for (int trial = 0; trial < 12; ++trial) {
      Box b;
      b.n = n;
      for (int a = 0; a < n; ++a) {
        b.lo[static_cast<std::size_t>(a)] = u(rng);
        b.hi[static_cast<std::size_t>(a)] = b.lo[static_cast<std::size_t>(a)] + w(rng);
      }
      const Interval d = distance_interval(m, b);
      CHECK(d.lo <= d.hi);
      // Probe a few points in the box: sampled distance >= true distance >= d.lo,
      // and true distance <= d.hi; sampling at 2e5 parameters is within 1e-4 of true.
      for (int s = 0; s < 5; ++s) {
        std::array<double, 4> x{};
        for (int a = 0; a < n; ++a) {
          const auto ai = static_cast<std::size_t>(a);
          x[ai] = b.lo[ai] + (b.hi[ai] - b.lo[ai]) * std::uniform_real_distribution<double>(0, 1)(rng);
        }
        const double sd = sampled_distance(m, std::span<const double>(x.data(), static_cast<std::size_t>(n)));
        INFO(m.kind());
        CHECK(d.lo <= sd + 1e-12);
        CHECK(sd - 1e-3 <= d.hi);
      }
    }
  }
}

TEST_CASE("refinement never loosens the enclosure") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& m : curves()) {
    if (m.ambient_dim() != 2) continue;
    for (int trial = 0; trial < 40; ++trial) {
      const double x0 = u(rng) * 0.9, y0 = u(rng) * 0.9, s = 0.1;
      const Box parent = box2(x0, x0 + s, y0, y0 + s);
      const Interval dp = distance_interval(m, parent);
      const double tol = distance_tolerance(parent);
      for (int c = 0; c < 4; ++c) {
        const double cx = x0 + (c & 1) * s / 2, cy = y0 + (c >> 1) * s / 2;
        const Interval dc = distance_interval(m, box2(cx, cx + s / 2, cy, cy + s / 2));
        INFO(m.kind());
        CHECK(dc.lo >= dp.lo - 2 * tol);
        CHECK(dc.hi <= dp.hi + 2 * tol);
      }
    }
  }
}

TEST_CASE("classification agrees with dense sampling") {
  const auto c = ManifoldSpec::circle({0.5, 0.5}, 0.4);
  const double delta = 1.0 / 3;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Box b = box2(i / 3.0, (i + 1) / 3.0, j / 3.0, (j + 1) / 3.0);
      const Relation r = cell_vs_neighborhood(c, delta, b);
      int near = 0, far = 0;
      for (int a = 0; a <= 100; ++a) {
        for (int bb = 0; bb <= 100; ++bb) {
          const double x = b.lo[0] + (b.hi[0] - b.lo[0]) * a / 100.0, y = b.lo[1] + (b.hi[1] - b.lo[1]) * bb / 100.0;
          const double d = std::abs(std::hypot(x - 0.5, y - 0.5) - 0.4);
          (d <= delta ? near : far)++;
        }
      }
      if (r == Relation::inside) CHECK(far == 0);
      if (r == Relation::outside) CHECK(near == 0);
    }
  }
}

TEST_CASE("similarity transforms") {
  const auto unit = ManifoldSpec::circle({0, 0}, 1);
  SimilarityTransform t = SimilarityTransform::identity(2);
  t.t = 2;
  t.v = {1, 0};
  const auto moved = apply_transform(unit, t);
  const auto& s = std::get<Sphere>(moved.shape());
  CHECK(s.center[0] == doctest::Approx(1.0));
  CHECK(s.center[1] == doctest::Approx(0.0));
  CHECK(s.radius == doctest::Approx(2.0));

  SimilarityTransform bad = SimilarityTransform::identity(2);
  bad.g[0][1] = 0.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = SimilarityTransform::identity(2);
  bad.t = 0;
  CHECK_THROWS_AS(bad.validate(), Error);

  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  const SimilarityTransform rot = SimilarityTransform::rotation2d(std::numbers::pi / 2);
  SimilarityTransform general = SimilarityTransform::rotation2d(0.7);
  general.t = 0.6;
  general.v = {0.2, -0.1};
  for (const auto& m : curves()) {
    if (m.ambient_dim() != 2) continue;
    for (const auto& T : {SimilarityTransform::identity(2), rot, general}) {
      const auto tm = apply_transform(m, T);
      for (int i = 0; i < 100; ++i) {
        const std::array<double, 2> x{u(rng), u(rng)};
        const auto y = T.inverse(x);
        const Interval lhs = point_distance(tm, x);
        const Interval rhs = point_distance(m, std::span<const double>(y.data(), 2));
        INFO(m.kind());
        // dist(x, T(M)) = t dist(T^-1 x, M), both sides enclosed.
        CHECK(lhs.lo <= T.t * rhs.hi + 1e-9);
        CHECK(T.t * rhs.lo <= lhs.hi + 1e-9);
        if (m.kind() != "implicit") CHECK(std::abs(lhs.hi - T.t * rhs.hi) <= 1e-9 + 2e-7 * T.t);
      }
    }
  }
  // Identity changes nothing.
  for (const auto& m : curves()) {
    if (m.ambient_dim() != 2) continue;
    const auto same = apply_transform(m, SimilarityTransform::identity(2));
    for (int i = 0; i < 100; ++i) {
      const std::array<double, 2> x{u(rng), u(rng)};
      CHECK(point_distance(same, x).hi == doctest::Approx(point_distance(m, x).hi).epsilon(1e-9));
    }
  }
}

TEST_CASE("implicit polynomial gives certified lower bounds only") {
  // x^2 + y^2 - 0.16 = 0 around (0,0): a circle of radius 0.4.
  const auto m = ManifoldSpec::implicit(2, {{1.0, {2, 0}}, {1.0, {0, 2}}, {-0.16, {0, 0}}}, 1, 0.5, 1.0);
  const auto ref = ManifoldSpec::circle({0, 0}, 0.4);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng), y = u(rng);
    const Box b = box2(x, x + 0.05, y, y + 0.05);
    CHECK(distance_interval(m, b).lo <= distance_interval(ref, b).lo + 1e-12);
    CHECK(std::isinf(distance_interval(m, b).hi));
  }
  const std::array<double, 2> p{0.8, 0.0};
  CHECK(point_distance(m, p).lo > 0.1);
}

TEST_CASE("spheres in three dimensions") {
  const auto s = ManifoldSpec::circle({0.5, 0.5, 0.5}, 0.3);
  Box b;
  b.n = 3;
  b.lo = {0.5, 0.5, 0.9, 0};
  b.hi = {0.5, 0.5, 1.0, 0};
  const Interval d = distance_interval(s, b);
  CHECK(d.lo == doctest::Approx(0.1));
  CHECK(d.hi == doctest::Approx(0.2));
  const std::array<double, 3> c{0.5, 0.5, 0.5};
  CHECK(point_distance(s, c).lo == doctest::Approx(0.3));
  CHECK(point_box(c).n == 3);
}
