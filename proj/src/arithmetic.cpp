#include "digitlens/arithmetic.hpp"

#include "digitlens/counting.hpp"

#include <cmath>

namespace digitlens {

const char* to_string(BinStatus s) {
  switch (s) {
    case BinStatus::hit: return "hit";
    case BinStatus::empty: return "empty";
    case BinStatus::unknown: return "unknown";
  }
  return "?";
}

const char* to_string(CoverMap m) {
  switch (m) {
    case CoverMap::pinned_distance: return "pinned_distance";
    case CoverMap::sum: return "sum";
    case CoverMap::product: return "product";
    case CoverMap::sum_of_squares: return "sum_of_squares";
  }
  return "?";
}

CoverMap parse_cover_map(const std::string& s) {
  if (s == "sum") return CoverMap::sum;
  if (s == "product") return CoverMap::product;
  if (s == "sum_of_squares") return CoverMap::sum_of_squares;
  if (s == "pinned_distance") return CoverMap::pinned_distance;
  throw Error("unknown map '" + s + "' (expected sum, product or sum_of_squares)");
}

namespace {

CoverageReport run_cover(const CellTree& tree, CoverMap map, std::array<double, 2> pin, double a, double b,
                         double delta, int depth, const CoverOptions& options) {
  if (tree.dim() != 2) throw Error("coverage: the system must be two-dimensional");
  if (!(delta > 0.0)) throw Error("coverage: delta must be positive");
  if (!(b > a)) throw Error("coverage: target interval must satisfy a < b");
  if (depth < 0) throw Error("coverage: depth must be nonnegative");
  for (int ax = 0; ax < 2; ++ax) {
    if (std::pow(static_cast<double>(tree.base(ax)), -depth) > delta * (1.0 + 1e-12)) {
      throw Error("coverage: cells at depth " + std::to_string(depth) + " are coarser than delta; increase depth");
    }
  }
  const double nb = std::ceil((b - a) / delta - 1e-9);
  if (nb > 1e7) throw Error("coverage: more than 1e7 bins; use a larger delta");

  kernels::CoverQuery q;
  q.tree = &tree;
  q.map = map;
  q.pin = pin;
  q.pin_exact = {rational_from_double(pin[0]), rational_from_double(pin[1])};
  q.depth = depth;
  q.a = a;
  q.bins = static_cast<std::int64_t>(nb);
  q.width = (b - a) / nb;
  const Rational ea = rational_from_double(a), eb = rational_from_double(b);
  for (std::int64_t i = 0; i <= q.bins; ++i) q.edges.push_back(ea + (eb - ea) * Rational(BigInt(i), BigInt(q.bins)));
  q.max_nodes = options.max_nodes > 0 ? options.max_nodes : default_max_nodes();

  const auto tally = options.parallel ? kernels::omp::cover(q) : kernels::serial::cover(q);

  CoverageReport r;
  r.map = to_string(map);
  r.a = a;
  r.b = b;
  r.delta = delta;
  r.depth = depth;
  r.nodes = tally.nodes;
  std::size_t hits = 0;
  for (std::int64_t i = 0; i < q.bins; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    CoverBin bin;
    bin.lo_exact = q.edges[ui];
    bin.hi_exact = q.edges[ui + 1];
    bin.lo = to_double(bin.lo_exact);
    bin.hi = to_double(bin.hi_exact);
    if (tally.witness[ui]) {
      bin.status = BinStatus::hit;
      bin.witness = tally.witness[ui]->point;
      bin.witness_value = tally.witness[ui]->value;
      ++hits;
    } else {
      bin.status = tally.possible[ui] ? BinStatus::unknown : BinStatus::empty;
    }
    r.bins.push_back(std::move(bin));
  }
  r.hit_fraction = static_cast<double>(hits) / static_cast<double>(q.bins);
  return r;
}

}  // namespace

CoverageReport pinned_distance_cover(const CellTree& tree, std::array<double, 2> pin, double a, double b, double delta,
                                     int depth, const CoverOptions& options) {
  return run_cover(tree, CoverMap::pinned_distance, pin, a, b, delta, depth, options);
}

CoverageReport binary_map_cover(const DigitSystem& A, const DigitSystem& B, CoverMap map, double a, double b,
                                double delta, int depth, const CoverOptions& options) {
  if (A.dim() != 1 || B.dim() != 1) throw Error("binary_map_cover: both systems must be one-dimensional");
  if (map == CoverMap::pinned_distance) throw Error("binary_map_cover: use pinned_distance_cover for distances");
  const CellTree tree(ProductSystem({A, B}));
  return run_cover(tree, map, {0.0, 0.0}, a, b, delta, depth, options);
}

std::vector<HitRun> interval_detect(const CoverageReport& report) {
  std::vector<HitRun> runs;
  for (std::size_t i = 0; i < report.bins.size();) {
    if (report.bins[i].status != BinStatus::hit) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < report.bins.size() && report.bins[j + 1].status == BinStatus::hit) ++j;
    runs.push_back({i, j, report.bins[i].lo, report.bins[j].hi});
    i = j + 1;
  }
  return runs;
}

}  // namespace digitlens
