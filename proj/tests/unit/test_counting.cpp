#include "digitlens/counting.hpp"

#include "../support/exhaustive.hpp"
#include "../support/systems.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace digitlens;

namespace {

std::vector<ManifoldSpec> manifolds2() {
  return {ManifoldSpec::circle({0.5, 0.5}, 0.4), ManifoldSpec::circle({0.1, 0.9}, 0.75),
          ManifoldSpec::superellipse(2), ManifoldSpec::superellipse(3), ManifoldSpec::hyperbola(0.2),
          ManifoldSpec::veronese(2), ManifoldSpec::segment({0.5, 0.0}, {0.5, 1.0})};
}

}  // namespace

TEST_CASE("count examples") {
  const CellTree lebesgue(DigitSystem::full(3, 2));
  const auto circle = ManifoldSpec::circle({0.5, 0.5}, 0.4);
  const auto r = count_cells_near(lebesgue, circle, 1.0 / 3, 1);
  CHECK(r.meeting() == 9);
  CHECK(r.measure_upper == 1);
  const auto exh = oracle::exhaustive_count({3, 3}, {oracle::full_digits({3, 3})}, circle, 1.0 / 3, 1);
  CHECK(r.inside == exh.inside);
  CHECK(r.straddle == exh.straddle);

  const CellTree carpet(testsys::carpet());
  const auto all = count_cells_near(carpet, circle, 1.5, 3);
  CHECK(all.inside == 512);
  CHECK(all.measure_lower == 1);

  const CellTree point(DigitSystem(3, 2, {{0, 0}}));
  const auto none = count_cells_near(point, ManifoldSpec::circle({0, 0}, 1), 0.1, 3);
  CHECK(none.meeting() == 0);
  CHECK(none.measure_upper == 0);

  CHECK_THROWS_AS(count_cells_near(carpet, circle, 0.01, 2), Error);
  CHECK_THROWS_AS(count_cells_near(carpet, circle, 0.0, 2), Error);
  CountOptions tiny;
  tiny.max_nodes = 10;
  CHECK_THROWS_AS(count_cells_near(carpet, circle, 1.0 / 81, 4, tiny), Error);
}

TEST_CASE("pruned counts equal exhaustive enumeration") {
  struct Sys {
    CellTree tree;
    std::vector<int> bases;
    std::vector<oracle::Digits> levels;
  };
  const DigitSystem k9 = testsys::prefix(10, 9);
  std::vector<Sys> systems;
  for (const auto& s : {testsys::carpet(), testsys::carpet(1), DigitSystem::full(3, 2), testsys::box(4, 3, 2)}) {
    systems.push_back({CellTree(s), {s.base(), s.base()}, oracle::levels_of(s)});
  }
  systems.push_back({CellTree(ProductSystem({testsys::cantor(), testsys::prefix(4, 2)})), {3, 4},
                     {oracle::product_digits({testsys::cantor(), testsys::prefix(4, 2)})}});
  int pairs = 0;
  for (const auto& s : systems) {
    for (const auto& m : manifolds2()) {
      for (int depth = 1; depth <= 3; ++depth) {
        for (double scale : {1.0, 2.5}) {
          const int coarsest = *std::min_element(s.bases.begin(), s.bases.end());
          const double delta = scale * std::pow(static_cast<double>(coarsest), -depth);
          const auto r = count_cells_near(s.tree, m, delta, depth);
          const auto e = oracle::exhaustive_count(s.bases, s.levels, m, delta, depth);
          INFO(m.kind() << " depth " << depth << " delta " << delta);
          CHECK(r.inside == e.inside);
          CHECK(r.straddle == e.straddle);
        }
      }
      ++pairs;
    }
  }
  CHECK(pairs >= 20);
}

TEST_CASE("serial and parallel counts agree") {
  const CellTree tree(testsys::box(10, 9, 2));
  const auto circle = ManifoldSpec::circle({0.5, 0.5}, 0.4);
  CountOptions serial;
  serial.parallel = false;
  for (int k = 1; k <= 4; ++k) {
    const double delta = std::pow(10.0, -k);
    const auto a = count_cells_near(tree, circle, delta, k, serial);
    const auto b = count_cells_near(tree, circle, delta, k);
    CHECK(a.inside == b.inside);
    CHECK(a.straddle == b.straddle);
    CHECK(a.measure_upper == b.measure_upper);
  }
}

TEST_CASE("monotone in delta and nested under refinement") {
  const CellTree tree(testsys::carpet());
  for (const auto& m : manifolds2()) {
    std::uint64_t prev = 0;
    Rational prev_upper = 0;
    for (double delta : {0.02, 0.04, 0.08, 0.16, 0.32}) {
      const auto r = count_cells_near(tree, m, delta, 4);
      CHECK(r.meeting() >= prev);
      CHECK(r.measure_upper >= prev_upper);
      CHECK(r.measure_lower <= r.measure_upper);
      CHECK(r.measure_upper <= 1);
      prev = r.meeting();
      prev_upper = r.measure_upper;
    }
    const double delta = 0.1;
    for (int k = 3; k < 6; ++k) {
      const auto coarse = count_cells_near(tree, m, delta, k);
      const auto fine = count_cells_near(tree, m, delta, k + 1);
      CHECK(fine.meeting() <= 8 * coarse.meeting());
      CHECK(fine.measure_upper <= coarse.measure_upper);
      CHECK(fine.measure_lower >= coarse.measure_lower);
    }
  }
}

TEST_CASE("fit exponent") {
  auto f = fit_exponent({{0.1, 10}, {0.01, 100}, {0.001, 1000}});
  CHECK(f.exponent == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  f = fit_exponent({{0.1, 1}, {0.01, 1}, {0.001, 1}});
  CHECK(f.exponent == doctest::Approx(0.0));
  CHECK_THROWS_AS(fit_exponent({{0.1, 1}, {0.01, 1}}), Error);
  CHECK_THROWS_AS(fit_exponent({{0.1, 1}, {0.01, 0}, {0.001, 1}}), Error);
  CHECK_THROWS_AS(fit_exponent({{0.01, 1}, {0.1, 1}, {0.001, 1}}), Error);

  // Carpet covering counts with a neighbourhood containing the whole square.
  const CellTree tree(testsys::carpet());
  const auto seg = ManifoldSpec::segment({0.5, 0.0}, {0.5, 1.0});
  std::vector<ScalingPoint> pts;
  for (int k = 2; k <= 6; ++k) {
    const auto r = count_cells_near(tree, seg, 1.5, k);
    CHECK(r.inside == static_cast<std::uint64_t>(std::pow(8, k)));
    pts.push_back({std::pow(3.0, -k), static_cast<double>(r.inside)});
  }
  CHECK(fit_exponent(pts).exponent == doctest::Approx(std::log(8.0) / std::log(3.0)).epsilon(1e-9));
}

TEST_CASE("neighbourhood measure scaling") {
  const CellTree lebesgue(DigitSystem::full(3, 2));
  const auto circle = ManifoldSpec::circle({0.5, 0.5}, 0.3);
  const auto rep = neighborhood_measure_scaling(lebesgue, circle, {2, 3, 4, 5, 6}, 2);
  REQUIRE(rep.fit);
  CHECK(rep.target == 1);
  CHECK(std::abs(rep.decay_exponent - 1.0) < 0.05);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const double oracle = oracle::clipped_annulus_area(0.5, 0.5, 0.3, rep.rows[i].delta);
    CHECK(to_double(rep.rows[i].measure_lower) <= oracle + 1e-12);
    CHECK(to_double(rep.rows[i].measure_upper) >= oracle - 1e-12);
  }
  const CellTree point(DigitSystem(3, 2, {{0, 0}}));
  const auto deg = neighborhood_measure_scaling(point, ManifoldSpec::circle({0.5, 0.5}, 0.4), {2, 3, 4});
  CHECK(deg.degenerate);
  CHECK(deg.note.find("zero mass") != std::string::npos);
  CHECK_FALSE(deg.fit);
}

TEST_CASE("sharpness first row") {
  auto r = sharpness_first_row(10, 8, 8, 2, 1);
  CHECK(r.prediction == doctest::Approx(9.0));
  CHECK(r.count >= 9);
  CHECK(r.pass);
  r = sharpness_first_row(10, 8, 8, 3, 1);
  CHECK(r.count >= 81);
  r = sharpness_first_row(10, 8, 8, 2, 0);
  CHECK(r.count == 1);
  CHECK(r.delta == 1.0);
  CHECK_THROWS_AS(sharpness_first_row(10, 9, 8, 2, 1), Error);
  CHECK_THROWS_AS(sharpness_first_row(10, 8, 8, 1, 1), Error);

  // Brute force over every admissible cell of the product at depth kl.
  for (auto [p, m, k, l] : std::vector<std::array<int, 4>>{{10, 8, 2, 1}, {10, 8, 3, 1}, {5, 2, 2, 1}, {4, 2, 3, 1}}) {
    const auto got = sharpness_first_row(p, m, m, k, l);
    const DigitSystem d = testsys::prefix(p, m + 1);
    const std::int64_t row = static_cast<std::int64_t>(std::pow(p, (k - 1) * l));
    const auto e = oracle::exhaustive_count({p, p}, {oracle::product_digits({d, d})}, ManifoldSpec::superellipse(k),
                                            got.delta, k * l, {{0, row}, {0, 1}});
    CHECK(got.count == e.inside + e.straddle);
  }
}

TEST_CASE("l search") {
  const auto circle = ManifoldSpec::circle({0.5, 0.5}, 0.4);
  const auto leb = l_search(DigitSystem::full(3, 2), circle, {2, 3, 4}, 0.1, 2);
  REQUIRE(leb.l);
  CHECK(*leb.l == 0);
  const auto car = l_search(testsys::carpet(), circle, {2, 3, 4, 5, 6}, 0.1, 4);
  CHECK(car.applicable);
  REQUIRE(car.l);
  CHECK(car.levels.back().pass);
  const auto na = l_search(testsys::cantor(), ManifoldSpec::circle({0.5}, 0.2), {2, 3}, 0.1, 2);
  CHECK_FALSE(na.applicable);
}

TEST_CASE("transform sweep") {
  const CellTree lebesgue(DigitSystem::full(3, 2));
  const auto unit = ManifoldSpec::circle({0, 0}, 1);
  std::vector<SimilarityTransform> grid;
  for (double r : {0.1, 0.2, 0.3, 0.4}) {
    SimilarityTransform t = SimilarityTransform::identity(2);
    t.t = r;
    t.v = {0.5, 0.5};
    grid.push_back(t);
  }
  SweepOptions o;
  o.depth_offset = 4;
  const auto rows = transform_sweep(lebesgue, unit, grid, {2, 3, 4}, o);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double oracle = oracle::clipped_annulus_area(0.5, 0.5, grid[i].t, rows[i].deltas.back()) /
                          rows[i].deltas.back();
    CHECK(rows[i].ratio == doctest::Approx(oracle).epsilon(0.05));
    CHECK(rows[i].bounded_away);
  }
  const CellTree point(DigitSystem(3, 2, {{0, 0}}));
  for (const auto& row : transform_sweep(point, unit, grid, {2, 3, 4}, o)) {
    CHECK(row.ratio == 0.0);
    CHECK_FALSE(row.bounded_away);
  }
}
