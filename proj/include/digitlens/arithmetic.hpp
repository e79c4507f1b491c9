#pragma once

#include "digitlens/cell_tree.hpp"
#include "digitlens/kernels.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace digitlens {

enum class BinStatus { hit, empty, unknown };
const char* to_string(BinStatus s);

using CoverMap = kernels::CoverMap;
const char* to_string(CoverMap m);
CoverMap parse_cover_map(const std::string& s);

struct CoverBin {
  double lo = 0.0;
  double hi = 0.0;
  Rational lo_exact, hi_exact;
  BinStatus status = BinStatus::unknown;
  // Point of K (or of K_A x K_B) whose image lies in the bin; set iff hit.
  std::optional<std::array<Rational, 2>> witness;
  double witness_value = 0.0;
};

/// Three-valued coverage of [a, b] at resolution delta.
struct CoverageReport {
  std::string map;
  double a = 0.0, b = 0.0;
  double delta = 0.0;
  int depth = 0;
  std::vector<CoverBin> bins;
  double hit_fraction = 0.0;
  std::int64_t nodes = 0;
};

struct CoverOptions {
  std::int64_t max_nodes = 0;  // 0 = default_max_nodes()
  bool parallel = true;
};

CoverageReport pinned_distance_cover(const CellTree& tree, std::array<double, 2> pin, double a, double b, double delta,
                                     int depth, const CoverOptions& options = {});
CoverageReport binary_map_cover(const DigitSystem& A, const DigitSystem& B, CoverMap map, double a, double b,
                                double delta, int depth, const CoverOptions& options = {});

struct HitRun {
  std::size_t first = 0, last = 0;  // bin indices, inclusive
  double lo = 0.0, hi = 0.0;
  double length() const { return hi - lo; }
  std::size_t bins() const { return last - first + 1; }
};

// Maximal runs of consecutive hit bins.
std::vector<HitRun> interval_detect(const CoverageReport& report);

}  // namespace digitlens
