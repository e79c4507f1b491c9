#pragma once

// Per-node logic shared by the serial and OpenMP tree kernels.

#include "digitlens/kernels.hpp"

#include <atomic>
#include <cstdint>
#include <vector>

namespace digitlens::kernels::detail {

struct Node {
  int level = 0;
  std::array<std::int64_t, kMaxDim> idx{};
};

void expand(const CellTree& tree, const Node& n, std::vector<Node>& out);

// Splits the root into at least `target` independent subtrees (or stops at
// `max_level`), calling `keep(node)` to decide whether a node survives.
template <class Keep>
std::vector<Node> frontier(const CellTree& tree, int max_level, std::size_t target, Keep&& keep) {
  std::vector<Node> level{Node{}};
  if (!keep(level.front())) return {};
  while (!level.empty() && level.front().level < max_level && level.size() < target) {
    std::vector<Node> next, kids;
    for (const auto& n : level) {
      kids.clear();
      expand(tree, n, kids);
      for (const auto& c : kids) {
        if (keep(c)) next.push_back(c);
      }
    }
    level = std::move(next);
  }
  return level;
}

class CountWalker {
 public:
  CountWalker(const CountQuery& q, std::atomic<std::int64_t>& nodes);

  // Tallies terminal outcomes; true when the children must be visited.
  bool visit(const Node& n, CountTally& t) const;
  void walk(const Node& n, CountTally& t) const;
  const CellTree& tree() const { return *q_.tree; }
  int depth() const { return q_.depth; }

 private:
  Box box_of(const Node& n) const;

  const CountQuery& q_;
  std::atomic<std::int64_t>& nodes_;
  std::vector<std::vector<std::int64_t>> scale_;  // [axis][level] = p^level
  std::vector<std::int64_t> below_;               // admissible leaves under a node at each level, -1 if huge
};

struct LeafHit {
  bool set = false;
  std::array<std::int64_t, 2> idx{};
  double value = 0.0;
};

struct LocalCover {
  std::vector<LeafHit> hit;
  std::vector<char> possible;
  std::int64_t nodes = 0;
};

class CoverWalker {
 public:
  CoverWalker(const CoverQuery& q, std::atomic<std::int64_t>& nodes);

  // False when the node's image misses the target.
  bool in_target(const Node& n) const;
  void walk(const Node& n, LocalCover& c) const;
  LocalCover empty_local() const;
  CoverTally finish(const std::vector<const LocalCover*>& parts) const;
  const CellTree& tree() const { return *q_.tree; }
  int depth() const { return q_.depth; }

 private:
  Interval image(const Node& n) const;
  bool exact_in_bin(const Node& leaf, std::int64_t bin) const;
  std::array<Rational, 2> exact_point(const Node& leaf) const;

  const CoverQuery& q_;
  std::atomic<std::int64_t>& nodes_;
  std::vector<std::vector<double>> scale_;  // [axis][level]
  std::vector<std::vector<double>> tmin_, tmax_, trep_;
  std::vector<Rational> trep_exact_[2];
};

}  // namespace digitlens::kernels::detail
