#include "digitlens/arithmetic.hpp"

#include "../support/systems.hpp"

#include <doctest.h>

#include <set>

using namespace digitlens;

namespace {

void check_witnesses(const CoverageReport& r, CoverMap map, std::array<Rational, 2> pin = {0, 0}) {
  for (const auto& b : r.bins) {
    if (b.status != BinStatus::hit) continue;
    REQUIRE(b.witness);
    const auto& [x, y] = *b.witness;
    Rational v;
    switch (map) {
      case CoverMap::sum: v = x + y; break;
      case CoverMap::product: v = x * y; break;
      case CoverMap::sum_of_squares: v = x * x + y * y; break;
      case CoverMap::pinned_distance: {
        const Rational d2 = (x - pin[0]) * (x - pin[0]) + (y - pin[1]) * (y - pin[1]);
        CHECK(b.lo_exact * b.lo_exact <= d2);
        CHECK(d2 <= b.hi_exact * b.hi_exact);
        continue;
      }
    }
    CHECK(b.lo_exact <= v);
    CHECK(v <= b.hi_exact);
  }
}

std::vector<std::string> statuses(const CoverageReport& r) {
  std::vector<std::string> s;
  for (const auto& b : r.bins) s.push_back(to_string(b.status));
  return s;
}

}  // namespace

TEST_CASE("pinned distance coverage") {
  const CellTree full(DigitSystem::full(3, 2));
  const auto r = pinned_distance_cover(full, {0, 0}, 0.1, 1.0, 0.01, 5);
  CHECK(r.bins.size() == 90);
  CHECK(r.hit_fraction == 1.0);
  check_witnesses(r, CoverMap::pinned_distance);

  const CellTree point(DigitSystem(3, 2, {{0, 0}}));
  const auto e = pinned_distance_cover(point, {0, 0}, 0.1, 1.0, 0.01, 5);
  CHECK(e.hit_fraction == 0.0);
  for (const auto& b : e.bins) CHECK(b.status == BinStatus::empty);

  const CellTree k2(testsys::box(10, 9, 2));
  const auto d = pinned_distance_cover(k2, {0, 0}, 0.5, 0.7, 1e-3, 4);
  CHECK(d.hit_fraction == 1.0);
  check_witnesses(d, CoverMap::pinned_distance);

  CHECK_THROWS_AS(pinned_distance_cover(full, {0, 0}, 0.1, 1.0, 0.01, 2), Error);
  CHECK_THROWS_AS(pinned_distance_cover(CellTree(testsys::cantor()), {0, 0}, 0.1, 1.0, 0.1, 3), Error);
}

TEST_CASE("cantor sum set against pair enumeration") {
  const DigitSystem c = testsys::cantor();
  const auto r = binary_map_cover(c, c, CoverMap::sum, 0.2, 1.8, 0.01, 6);
  REQUIRE(r.bins.size() == 160);
  CHECK(r.hit_fraction == 1.0);
  check_witnesses(r, CoverMap::sum);

  // Left endpoints at depth 6 are a/729 with ternary digits of a in {0, 2}.
  std::vector<int> left;
  for (int a = 0; a < 729; ++a) {
    bool ok = true;
    for (int x = a; x > 0; x /= 3) ok = ok && x % 3 != 1;
    if (ok) left.push_back(a);
  }
  std::set<int> oracle_hits;
  for (int a : left) {
    for (int b : left) {
      // bin i = [(20 + i)/100, (21 + i)/100]
      for (int i = 0; i < 160; ++i) {
        if (729 * (20 + i) <= 100 * (a + b) && 100 * (a + b) <= 729 * (21 + i)) oracle_hits.insert(i);
      }
    }
  }
  std::set<int> hits;
  for (std::size_t i = 0; i < r.bins.size(); ++i) {
    if (r.bins[i].status == BinStatus::hit) hits.insert(static_cast<int>(i));
  }
  CHECK(hits == oracle_hits);
}

TEST_CASE("restricted-digit sum sets miss digits") {
  // D = {0,1,2} in base 7: K + K has base-7 digits {0..4} with no carries.
  const int p = 7, m = 3, depth = 3;
  const DigitSystem d = testsys::prefix(p, m);
  const double delta = 0.01;
  const auto r = binary_map_cover(d, d, CoverMap::sum, 0.0, 1.0, delta, depth);
  // Depth-3 hulls of K_{7,{0..4}}: [c, c + (4/6) 7^-3].
  const Rational top = Rational(2 * (m - 1), p - 1) / Rational(343);
  std::vector<Rational> starts;
  for (int a = 0; a < 2 * m - 1; ++a)
    for (int b = 0; b < 2 * m - 1; ++b)
      for (int c = 0; c < 2 * m - 1; ++c) starts.push_back(Rational(a * 49 + b * 7 + c, 343));
  int empties = 0;
  for (const auto& bin : r.bins) {
    bool meets = false;
    for (const auto& s : starts) meets = meets || (s <= bin.hi_exact && bin.lo_exact <= s + top);
    CHECK((bin.status == BinStatus::empty) == !meets);
    empties += bin.status == BinStatus::empty;
  }
  CHECK(empties > 0);
  // Above 2(m-1)/(p-1) nothing can be hit.
  for (const auto& bin : r.bins) {
    if (bin.lo > 2.0 * (m - 1) / (p - 1) + 1e-12) CHECK(bin.status == BinStatus::empty);
  }
  check_witnesses(r, CoverMap::sum);
}

TEST_CASE("product and sum of squares") {
  const DigitSystem zero = DigitSystem::one_dim(5, {0});
  const auto r = binary_map_cover(zero, testsys::cantor(), CoverMap::product, 0.0, 0.5, 0.1, 3);
  REQUIRE(r.bins.size() == 5);
  CHECK(r.bins[0].status == BinStatus::hit);
  for (std::size_t i = 1; i < 5; ++i) CHECK(r.bins[i].status == BinStatus::empty);

  const DigitSystem k = testsys::prefix(10, 9);
  const auto prod = binary_map_cover(k, k, CoverMap::product, 0.2, 0.4, 1e-3, 4);
  check_witnesses(prod, CoverMap::product);
  std::size_t longest = 0;
  for (const auto& run : interval_detect(prod)) longest = std::max(longest, run.bins());
  CHECK(longest >= 10);

  const auto sq = binary_map_cover(k, k, CoverMap::sum_of_squares, 0.3, 0.6, 1e-3, 4);
  check_witnesses(sq, CoverMap::sum_of_squares);
  CHECK(sq.hit_fraction > 0.9);
}

TEST_CASE("swapping the factors changes nothing") {
  const DigitSystem a = testsys::cantor(), b = DigitSystem::one_dim(4, {0, 3});
  for (auto map : {CoverMap::sum, CoverMap::product}) {
    const auto ab = binary_map_cover(a, b, map, 0.0, 1.5, 0.02, 5);
    const auto ba = binary_map_cover(b, a, map, 0.0, 1.5, 0.02, 5);
    CHECK(statuses(ab) == statuses(ba));
  }
}

TEST_CASE("refinement only resolves unknown bins") {
  const DigitSystem a = testsys::cantor(), b = testsys::prefix(5, 2);
  for (auto map : {CoverMap::sum, CoverMap::product, CoverMap::sum_of_squares}) {
    auto prev = binary_map_cover(a, b, map, 0.0, 1.2, 0.02, 4);
    for (int depth = 5; depth <= 7; ++depth) {
      const auto next = binary_map_cover(a, b, map, 0.0, 1.2, 0.02, depth);
      for (std::size_t i = 0; i < next.bins.size(); ++i) {
        if (prev.bins[i].status == BinStatus::hit) CHECK(next.bins[i].status != BinStatus::empty);
        if (prev.bins[i].status == BinStatus::empty) CHECK(next.bins[i].status == BinStatus::empty);
      }
      prev = next;
    }
  }
}

TEST_CASE("serial and parallel coverage agree") {
  const DigitSystem k = testsys::prefix(10, 9);
  CoverOptions serial;
  serial.parallel = false;
  const auto a = binary_map_cover(k, k, CoverMap::product, 0.0, 0.8, 2e-3, 3, serial);
  const auto b = binary_map_cover(k, k, CoverMap::product, 0.0, 0.8, 2e-3, 3);
  CHECK(statuses(a) == statuses(b));
  for (std::size_t i = 0; i < a.bins.size(); ++i) CHECK(a.bins[i].witness == b.bins[i].witness);
  const CellTree carpet(testsys::carpet());
  const auto c = pinned_distance_cover(carpet, {0.3, 0.2}, 0.0, 1.0, 0.01, 5, serial);
  const auto d = pinned_distance_cover(carpet, {0.3, 0.2}, 0.0, 1.0, 0.01, 5);
  CHECK(statuses(c) == statuses(d));
}

TEST_CASE("interval detection") {
  CoverageReport r;
  for (int i = 0; i < 10; ++i) {
    CoverBin b;
    b.lo = i * 0.1;
    b.hi = (i + 1) * 0.1;
    b.status = BinStatus::hit;
    r.bins.push_back(b);
  }
  auto runs = interval_detect(r);
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].lo == 0.0);
  CHECK(runs[0].hi == doctest::Approx(1.0));
  CHECK(runs[0].bins() == 10);
  for (std::size_t i = 1; i < r.bins.size(); i += 2) r.bins[i].status = BinStatus::empty;
  runs = interval_detect(r);
  CHECK(runs.size() == 5);
  for (const auto& run : runs) CHECK(run.bins() == 1);
}
