#pragma once

#include "digitlens/digit_system.hpp"
#include "digitlens/rational.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace digitlens {

// Admissible digit tuples at one level of the construction tree.
struct LevelRule {
  std::vector<int> tuples;  // flat, count x dim, lexicographic
  std::size_t count = 0;
  std::vector<int> axis_min;
  std::vector<int> axis_max;
  std::vector<int> min_tuple;  // lexicographically smallest tuple
};

/// The base-p construction tree of a DigitSystem or ProductSystem.
///
/// Levels below the free prefix admit every tuple; deeper levels admit the
/// digit set. For products each axis has its own base and its own prefix.
class CellTree {
 public:
  explicit CellTree(const DigitSystem& system);
  explicit CellTree(const ProductSystem& system);

  int dim() const { return dim_; }
  int base(int axis) const { return bases_[static_cast<std::size_t>(axis)]; }
  const std::vector<int>& bases() const { return bases_; }
  int max_base() const;
  bool uniform_base() const;

  const LevelRule& level(int j) const {
    return rules_[std::min<std::size_t>(static_cast<std::size_t>(j), rules_.size() - 1)];
  }
  // Number of levels with a distinct rule; levels >= this index use the last one.
  int stable_level() const { return static_cast<int>(rules_.size()) - 1; }

  // Admissible cells at depth k.
  BigInt cells_at_depth(int k) const;
  // Admissible cells strictly below `from` down to depth `to`.
  BigInt descendants(int from, int to) const;
  // Every admissible cell at depth k carries the same mass.
  Rational cell_mass(int k) const;

  // p_axis^k, or throws when it exceeds the 62-bit index range.
  std::int64_t scale(int axis, int k) const;

  // Offsets of the tail beyond depth k inside a depth-k cell, in cell units of
  // the ambient space: sum_{j>=k} v_j p^{-(j+1)} for the per-level axis minimum,
  // axis maximum, or lexicographic-minimum representative digit.
  double tail_min(int axis, int k) const;
  double tail_max(int axis, int k) const;
  double tail_rep(int axis, int k) const;
  Rational tail_rep_exact(int axis, int k) const;

 private:
  enum class TailKind { min, max, rep };
  Rational tail_exact(int axis, int k, TailKind kind) const;
  void finish();

  int dim_ = 0;
  std::vector<int> bases_;
  std::vector<LevelRule> rules_;
};

/// Depth-k word of digit tuples, most significant first (flattened, k x dim).
struct CellAddress {
  std::vector<int> word;

  int depth(int dim) const { return static_cast<int>(word.size()) / dim; }
  std::span<const int> tuple(int j, int dim) const {
    return {word.data() + static_cast<std::size_t>(j * dim), static_cast<std::size_t>(dim)};
  }
  bool operator==(const CellAddress&) const = default;
};

struct RationalBox {
  std::vector<Rational> lo;
  std::vector<Rational> hi;
};

struct MeasureValue {
  Rational exact;
  double approx = 0.0;
};

bool is_admissible(const CellTree& tree, const CellAddress& addr);
std::vector<CellAddress> children(const CellTree& tree, const CellAddress& addr);
RationalBox cell_box(const CellTree& tree, const CellAddress& addr);
MeasureValue cell_measure(const CellTree& tree, const CellAddress& addr);
// A point of K inside the cell: the word followed by the minimal admissible tuple forever.
std::vector<Rational> representative_point(const CellTree& tree, const CellAddress& addr);

// All admissible addresses at depth k in canonical order (small k only).
std::vector<CellAddress> enumerate_cells(const CellTree& tree, int k);

}  // namespace digitlens
