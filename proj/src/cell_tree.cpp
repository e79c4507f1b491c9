#include "digitlens/cell_tree.hpp"

#include <algorithm>

namespace digitlens {
namespace {

constexpr int kTailCache = 64;

LevelRule make_rule(std::vector<int> flat, int dim) {
  LevelRule r;
  r.count = flat.size() / static_cast<std::size_t>(dim);
  r.tuples = std::move(flat);
  r.axis_min.assign(static_cast<std::size_t>(dim), 1 << 30);
  r.axis_max.assign(static_cast<std::size_t>(dim), -1);
  for (std::size_t i = 0; i < r.count; ++i) {
    for (int a = 0; a < dim; ++a) {
      int v = r.tuples[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(a)];
      r.axis_min[static_cast<std::size_t>(a)] = std::min(r.axis_min[static_cast<std::size_t>(a)], v);
      r.axis_max[static_cast<std::size_t>(a)] = std::max(r.axis_max[static_cast<std::size_t>(a)], v);
    }
  }
  r.min_tuple.assign(r.tuples.begin(), r.tuples.begin() + dim);
  return r;
}

// Lexicographic product of per-axis digit lists.
std::vector<int> product_tuples(const std::vector<std::vector<int>>& axes) {
  std::vector<std::vector<int>> out{{}};
  for (const auto& ax : axes) {
    std::vector<std::vector<int>> next;
    next.reserve(out.size() * ax.size());
    for (const auto& prefix : out) {
      for (int v : ax) {
        auto t = prefix;
        t.push_back(v);
        next.push_back(std::move(t));
      }
    }
    out = std::move(next);
  }
  std::vector<int> flat;
  for (const auto& t : out) flat.insert(flat.end(), t.begin(), t.end());
  return flat;
}

std::vector<int> iota_digits(int p) {
  std::vector<int> v(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

}  // namespace

CellTree::CellTree(const DigitSystem& system) : dim_(system.dim()) {
  bases_.assign(static_cast<std::size_t>(dim_), system.base());
  const int l = system.free_prefix();
  if (l > 0) {
    std::vector<std::vector<int>> axes(static_cast<std::size_t>(dim_), iota_digits(system.base()));
    LevelRule full = make_rule(product_tuples(axes), dim_);
    for (int j = 0; j < l; ++j) rules_.push_back(full);
  }
  rules_.push_back(make_rule(system.flat_digits(), dim_));
}

CellTree::CellTree(const ProductSystem& system) : dim_(system.dim()) {
  int stable = 0;
  for (const auto& f : system.factors()) {
    bases_.push_back(f.base());
    stable = std::max(stable, f.free_prefix());
  }
  for (int j = 0; j <= stable; ++j) {
    std::vector<std::vector<int>> axes;
    for (const auto& f : system.factors()) {
      if (j < f.free_prefix()) {
        axes.push_back(iota_digits(f.base()));
      } else {
        axes.push_back(f.axis_digits(0));
      }
    }
    rules_.push_back(make_rule(product_tuples(axes), dim_));
  }
}

int CellTree::max_base() const { return *std::max_element(bases_.begin(), bases_.end()); }

bool CellTree::uniform_base() const {
  return std::all_of(bases_.begin(), bases_.end(), [&](int b) { return b == bases_.front(); });
}

BigInt CellTree::descendants(int from, int to) const {
  BigInt n = 1;
  for (int j = from; j < to; ++j) n *= static_cast<unsigned long long>(level(j).count);
  return n;
}

BigInt CellTree::cells_at_depth(int k) const { return descendants(0, k); }

Rational CellTree::cell_mass(int k) const { return Rational(BigInt(1), cells_at_depth(k)); }

std::int64_t CellTree::scale(int axis, int k) const {
  std::int64_t s = checked_pow(base(axis), k);
  if (s < 0) throw Error("CellTree: depth " + std::to_string(k) + " exceeds the 62-bit index range");
  return s;
}

Rational CellTree::tail_exact(int axis, int k, TailKind kind) const {
  const auto a = static_cast<std::size_t>(axis);
  auto pick = [&](const LevelRule& r) {
    switch (kind) {
      case TailKind::min: return r.axis_min[a];
      case TailKind::max: return r.axis_max[a];
      case TailKind::rep: return r.min_tuple[a];
    }
    return 0;
  };
  const BigInt p = base(axis);
  const int stable = stable_level();
  Rational sum = 0;
  for (int j = k; j < stable; ++j) {
    sum += Rational(BigInt(pick(level(j))), ipow(p, static_cast<unsigned>(j + 1)));
  }
  const int m = std::max(k, stable);
  // v p^{-(m+1)} / (1 - 1/p) = v / ((p - 1) p^m)
  sum += Rational(BigInt(pick(level(m))), (p - 1) * ipow(p, static_cast<unsigned>(m)));
  return sum;
}

double CellTree::tail_min(int axis, int k) const { return to_double(tail_exact(axis, k, TailKind::min)); }
double CellTree::tail_max(int axis, int k) const { return to_double(tail_exact(axis, k, TailKind::max)); }
double CellTree::tail_rep(int axis, int k) const { return to_double(tail_exact(axis, k, TailKind::rep)); }
Rational CellTree::tail_rep_exact(int axis, int k) const { return tail_exact(axis, k, TailKind::rep); }

bool is_admissible(const CellTree& tree, const CellAddress& addr) {
  const int n = tree.dim();
  if (addr.word.size() % static_cast<std::size_t>(n) != 0) return false;
  const int k = addr.depth(n);
  for (int j = 0; j < k; ++j) {
    const LevelRule& r = tree.level(j);
    auto t = addr.tuple(j, n);
    bool found = false;
    for (std::size_t i = 0; i < r.count && !found; ++i) {
      found = std::equal(t.begin(), t.end(), r.tuples.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
    if (!found) return false;
  }
  return true;
}

std::vector<CellAddress> children(const CellTree& tree, const CellAddress& addr) {
  const int n = tree.dim();
  const LevelRule& r = tree.level(addr.depth(n));
  std::vector<CellAddress> out;
  out.reserve(r.count);
  for (std::size_t i = 0; i < r.count; ++i) {
    CellAddress c = addr;
    auto first = r.tuples.begin() + static_cast<std::ptrdiff_t>(i * static_cast<std::size_t>(n));
    c.word.insert(c.word.end(), first, first + n);
    out.push_back(std::move(c));
  }
  return out;
}

RationalBox cell_box(const CellTree& tree, const CellAddress& addr) {
  const int n = tree.dim();
  const int k = addr.depth(n);
  RationalBox box;
  for (int a = 0; a < n; ++a) {
    const BigInt p = tree.base(a);
    BigInt idx = 0;
    for (int j = 0; j < k; ++j) idx = idx * p + addr.tuple(j, n)[static_cast<std::size_t>(a)];
    const BigInt s = ipow(p, static_cast<unsigned>(k));
    box.lo.emplace_back(idx, s);
    box.hi.emplace_back(idx + 1, s);
  }
  return box;
}

MeasureValue cell_measure(const CellTree& tree, const CellAddress& addr) {
  if (!is_admissible(tree, addr)) throw Error("cell_measure: address is not admissible");
  MeasureValue m;
  m.exact = tree.cell_mass(addr.depth(tree.dim()));
  m.approx = to_double(m.exact);
  return m;
}

std::vector<Rational> representative_point(const CellTree& tree, const CellAddress& addr) {
  const int n = tree.dim();
  const int k = addr.depth(n);
  RationalBox box = cell_box(tree, addr);
  std::vector<Rational> x;
  for (int a = 0; a < n; ++a) x.push_back(box.lo[static_cast<std::size_t>(a)] + tree.tail_rep_exact(a, k));
  return x;
}

std::vector<CellAddress> enumerate_cells(const CellTree& tree, int k) {
  std::vector<CellAddress> level{CellAddress{}};
  for (int j = 0; j < k; ++j) {
    std::vector<CellAddress> next;
    for (const auto& c : level) {
      auto ch = children(tree, c);
      next.insert(next.end(), std::make_move_iterator(ch.begin()), std::make_move_iterator(ch.end()));
    }
    level = std::move(next);
  }
  return level;
}

}  // namespace digitlens
