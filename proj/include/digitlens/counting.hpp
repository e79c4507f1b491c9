#pragma once

#include "digitlens/cell_tree.hpp"
#include "digitlens/kernels.hpp"
#include "digitlens/manifold.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace digitlens {

// Node cap for tree walks: DIGITLENS_MAX_NODES if set, else 5e7.
std::int64_t default_max_nodes();

struct CountOptions {
  std::int64_t max_nodes = 0;  // 0 = default_max_nodes()
  bool parallel = true;
  std::vector<kernels::IndexWindow> window;  // empty = whole tree
};

/// Depth-k cells of K that meet the delta-neighbourhood of M.
struct CountResult {
  double delta = 0.0;
  int depth = 0;
  std::uint64_t inside = 0;
  std::uint64_t straddle = 0;
  Rational measure_lower;  // mass of certified-inside cells
  Rational measure_upper;  // plus straddling cells
  std::int64_t nodes = 0;

  std::uint64_t meeting() const { return inside + straddle; }
};

CountResult count_cells_near(const CellTree& tree, const ManifoldSpec& m, double delta, int depth,
                             const CountOptions& options = {});

struct ScalingPoint {
  double delta = 0.0;
  double value = 0.0;
};

/// OLS fit of log value against log(1/delta).
struct ScalingFit {
  std::vector<ScalingPoint> points;
  double exponent = 0.0;  // slope
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<double> residuals;
};

ScalingFit fit_exponent(const std::vector<ScalingPoint>& points);

struct ScalingReport {
  std::vector<CountResult> rows;
  std::vector<double> ratios;  // measure_upper / delta^(n - dim M)
  std::optional<ScalingFit> fit;
  double decay_exponent = 0.0;  // -slope of measure_upper, compared against target
  double target = 0.0;          // n - dim M
  double ratio_spread = 0.0;    // max ratio / min ratio
  bool degenerate = false;
  std::string note;
};

// delta = p^-k for each k; the counting depth is k + depth_offset.
ScalingReport neighborhood_measure_scaling(const CellTree& tree, const ManifoldSpec& m, const std::vector<int>& ks,
                                           int depth_offset = 0, const CountOptions& options = {});

struct SharpnessResult {
  int p = 0, k = 0, l = 0;
  int depth = 0;
  double delta = 0.0;
  std::uint64_t count = 0;
  double prediction = 0.0;  // (p^{l(k-1)})^{dim_H K_{p,D1}}
  double c = 0.0;
  bool pass = false;
  std::int64_t nodes = 0;
};

// D1 = {0..m1}, D2 = {0..m2}; superellipse |x|^k + |y-1|^k = 1; cells of
// K_{p,D1} x K_{p,D2} at depth kl inside [0, p^-l] x [0, p^-kl].
SharpnessResult sharpness_first_row(int p, int m1, int m2, int k, int l, double c = 1.0,
                                    const CountOptions& options = {});

struct LSearchLevel {
  int l = 0;
  std::vector<double> deltas;
  std::vector<std::uint64_t> counts;
  std::vector<double> required;
  bool pass = false;
};

struct LSearchResult {
  bool applicable = true;
  std::optional<int> l;  // first passing level
  double exponent = 0.0;  // dim_H K + dim M - n
  std::vector<LSearchLevel> levels;
  std::string note;
};

LSearchResult l_search(const DigitSystem& system, const ManifoldSpec& m, const std::vector<int>& ks, double c = 0.1,
                       int l_max = 4, const CountOptions& options = {});

struct SweepRow {
  SimilarityTransform transform;
  std::vector<double> deltas;
  std::vector<double> ratios;  // per delta
  double ratio = 0.0;          // at the smallest delta
  double trend = 0.0;          // slope of log ratio against log(1/delta); 0 when some ratio vanishes
  bool bounded_away = false;   // every ratio >= threshold
};

struct SweepOptions {
  int depth_offset = 0;
  double threshold = 1e-3;
  CountOptions count;
};

std::vector<SweepRow> transform_sweep(const CellTree& tree, const ManifoldSpec& m,
                                      const std::vector<SimilarityTransform>& grid, const std::vector<int>& ks,
                                      const SweepOptions& options = {});

}  // namespace digitlens
