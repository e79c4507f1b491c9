#include "tree_walk.hpp"

#include <cmath>

namespace digitlens::kernels {

CountTally& CountTally::operator+=(const CountTally& o) {
  if (inside > UINT64_MAX - o.inside || straddle > UINT64_MAX - o.straddle) {
    throw Error("count_cells_near: cell count overflow");
  }
  inside += o.inside;
  straddle += o.straddle;
  nodes += o.nodes;
  return *this;
}

namespace detail {

void expand(const CellTree& tree, const Node& n, std::vector<Node>& out) {
  const int dim = tree.dim();
  const LevelRule& r = tree.level(n.level);
  for (std::size_t i = 0; i < r.count; ++i) {
    Node c;
    c.level = n.level + 1;
    for (int a = 0; a < dim; ++a) {
      auto ai = static_cast<std::size_t>(a);
      c.idx[ai] = n.idx[ai] * tree.base(a) + r.tuples[i * static_cast<std::size_t>(dim) + ai];
    }
    out.push_back(c);
  }
}

namespace {

void count_node(std::atomic<std::int64_t>& nodes, std::int64_t cap) {
  if (nodes.fetch_add(1, std::memory_order_relaxed) + 1 > cap) {
    throw Error("cell-tree expansion exceeded the node cap (" + std::to_string(cap) +
                "); use a larger delta or a smaller depth, or raise DIGITLENS_MAX_NODES");
  }
}

}  // namespace

// ---- counting ----------------------------------------------------------------

CountWalker::CountWalker(const CountQuery& q, std::atomic<std::int64_t>& nodes) : q_(q), nodes_(nodes) {
  const CellTree& t = *q.tree;
  scale_.resize(static_cast<std::size_t>(t.dim()));
  for (int a = 0; a < t.dim(); ++a) {
    for (int j = 0; j <= q.depth; ++j) scale_[static_cast<std::size_t>(a)].push_back(t.scale(a, j));
  }
  for (int j = 0; j <= q.depth; ++j) {
    BigInt d = t.descendants(j, q.depth);
    below_.push_back(d < BigInt(INT64_MAX) ? d.convert_to<std::int64_t>() : -1);
  }
}

Box CountWalker::box_of(const Node& n) const {
  Box b;
  b.n = tree().dim();
  for (int a = 0; a < b.n; ++a) {
    auto ai = static_cast<std::size_t>(a);
    const double s = static_cast<double>(scale_[ai][static_cast<std::size_t>(n.level)]);
    b.lo[ai] = static_cast<double>(n.idx[ai]) / s;
    b.hi[ai] = static_cast<double>(n.idx[ai] + 1) / s;
  }
  return b;
}

bool CountWalker::visit(const Node& n, CountTally& t) const {
  count_node(nodes_, q_.max_nodes);
  ++t.nodes;
  bool contained = true;
  if (!q_.window.empty()) {
    for (int a = 0; a < tree().dim(); ++a) {
      auto ai = static_cast<std::size_t>(a);
      const std::int64_t s = scale_[ai][static_cast<std::size_t>(q_.depth - n.level)];
      const std::int64_t lo = n.idx[ai] * s;
      const std::int64_t hi = (n.idx[ai] + 1) * s;
      const auto& w = q_.window[ai];
      if (lo >= w.hi || hi <= w.lo) return false;
      if (lo < w.lo || hi > w.hi) contained = false;
    }
  }
  const Box box = box_of(n);
  const ManifoldSpec& m = *q_.manifold;
  if (n.level == q_.depth) {
    switch (cell_vs_neighborhood(m, q_.delta, box)) {
      case Relation::inside: ++t.inside; break;
      case Relation::straddle: ++t.straddle; break;
      case Relation::outside: break;
    }
    return false;
  }
  const double slack = 4.0 * distance_tolerance(box) + 1e-12 * q_.delta + 1e-15;
  if (distance_lower(m, box) > q_.delta + slack) return false;
  const std::int64_t below = below_[static_cast<std::size_t>(n.level)];
  if (contained && below >= 0 && box.max_side() <= 2.0 * q_.delta &&
      distance_upper(m, box) <= q_.delta - slack) {
    t.inside += static_cast<std::uint64_t>(below);
    return false;
  }
  return true;
}

void CountWalker::walk(const Node& n, CountTally& t) const {
  if (!visit(n, t)) return;
  std::vector<Node> kids;
  expand(tree(), n, kids);
  for (const auto& c : kids) walk(c, t);
}

// ---- coverage ----------------------------------------------------------------

CoverWalker::CoverWalker(const CoverQuery& q, std::atomic<std::int64_t>& nodes) : q_(q), nodes_(nodes) {
  const CellTree& t = *q.tree;
  if (t.dim() != 2) throw Error("coverage: the cell tree must be two-dimensional");
  for (int a = 0; a < 2; ++a) {
    std::vector<double> s, lo, hi, rep;
    for (int j = 0; j <= q.depth; ++j) {
      s.push_back(static_cast<double>(t.scale(a, j)));
      lo.push_back(t.tail_min(a, j));
      hi.push_back(t.tail_max(a, j));
      rep.push_back(t.tail_rep(a, j));
    }
    scale_.push_back(std::move(s));
    tmin_.push_back(std::move(lo));
    tmax_.push_back(std::move(hi));
    trep_.push_back(std::move(rep));
  }
  trep_exact_[0].push_back(t.tail_rep_exact(0, q.depth));
  trep_exact_[1].push_back(t.tail_rep_exact(1, q.depth));
}

Interval CoverWalker::image(const Node& n) const {
  const auto j = static_cast<std::size_t>(n.level);
  Interval x[2];
  for (std::size_t a = 0; a < 2; ++a) {
    const double c = static_cast<double>(n.idx[a]) / scale_[a][j];
    x[a] = widen({c + tmin_[a][j], c + tmax_[a][j]});
  }
  switch (q_.map) {
    case CoverMap::pinned_distance: {
      Box b;
      b.n = 2;
      b.lo = {x[0].lo, x[1].lo, 0, 0};
      b.hi = {x[0].hi, x[1].hi, 0, 0};
      return widen({point_box_distance(q_.pin, b), point_box_farthest(q_.pin, b)});
    }
    case CoverMap::sum: return widen(x[0] + x[1]);
    case CoverMap::product: return widen(x[0] * x[1]);
    case CoverMap::sum_of_squares: return widen(ipow(x[0], 2) + ipow(x[1], 2));
  }
  return {};
}

bool CoverWalker::in_target(const Node& n) const {
  const Interval img = image(n);
  const double end = q_.a + static_cast<double>(q_.bins) * q_.width;
  const double margin = 1e-9 * q_.width;
  return !(img.hi < q_.a - margin || img.lo > end + margin);
}

std::array<Rational, 2> CoverWalker::exact_point(const Node& leaf) const {
  std::array<Rational, 2> x;
  for (int a = 0; a < 2; ++a) {
    auto ai = static_cast<std::size_t>(a);
    x[ai] = Rational(BigInt(leaf.idx[ai]), BigInt(tree().scale(a, q_.depth))) + trep_exact_[ai].front();
  }
  return x;
}

bool CoverWalker::exact_in_bin(const Node& leaf, std::int64_t bin) const {
  const auto x = exact_point(leaf);
  const Rational& lo = q_.edges[static_cast<std::size_t>(bin)];
  const Rational& hi = q_.edges[static_cast<std::size_t>(bin + 1)];
  switch (q_.map) {
    case CoverMap::pinned_distance: {
      const Rational dx = x[0] - q_.pin_exact[0];
      const Rational dy = x[1] - q_.pin_exact[1];
      const Rational d2 = dx * dx + dy * dy;
      if (hi < 0 || d2 > hi * hi) return false;
      return lo <= 0 || d2 >= lo * lo;
    }
    case CoverMap::sum: {
      const Rational v = x[0] + x[1];
      return lo <= v && v <= hi;
    }
    case CoverMap::product: {
      const Rational v = x[0] * x[1];
      return lo <= v && v <= hi;
    }
    case CoverMap::sum_of_squares: {
      const Rational v = x[0] * x[0] + x[1] * x[1];
      return lo <= v && v <= hi;
    }
  }
  return false;
}

LocalCover CoverWalker::empty_local() const {
  LocalCover c;
  c.hit.resize(static_cast<std::size_t>(q_.bins));
  c.possible.assign(static_cast<std::size_t>(q_.bins), 0);
  return c;
}

void CoverWalker::walk(const Node& n, LocalCover& c) const {
  count_node(nodes_, q_.max_nodes);
  ++c.nodes;
  const Interval img = image(n);
  const double end = q_.a + static_cast<double>(q_.bins) * q_.width;
  const double margin = 1e-9 * q_.width;
  if (img.hi < q_.a - margin || img.lo > end + margin) return;
  auto clamp_bin = [&](double v) {
    const double f = std::floor(v);
    if (f < 0.0) return std::int64_t{0};
    if (f >= static_cast<double>(q_.bins)) return q_.bins - 1;
    return static_cast<std::int64_t>(f);
  };
  const std::int64_t i0 = clamp_bin((img.lo - q_.a) / q_.width - 1e-9);
  const std::int64_t i1 = clamp_bin((img.hi - q_.a) / q_.width + 1e-9);
  bool all_hit = true;
  for (std::int64_t i = i0; i <= i1 && all_hit; ++i) all_hit = c.hit[static_cast<std::size_t>(i)].set;
  if (all_hit) return;

  if (n.level < q_.depth) {
    std::vector<Node> kids;
    expand(tree(), n, kids);
    for (const auto& k : kids) walk(k, c);
    return;
  }
  for (std::int64_t i = i0; i <= i1; ++i) c.possible[static_cast<std::size_t>(i)] = 1;
  const auto j = static_cast<std::size_t>(n.level);
  const double x = static_cast<double>(n.idx[0]) / scale_[0][j] + trep_[0][j];
  const double y = static_cast<double>(n.idx[1]) / scale_[1][j] + trep_[1][j];
  double v = 0.0;
  switch (q_.map) {
    case CoverMap::pinned_distance: v = std::hypot(x - q_.pin[0], y - q_.pin[1]); break;
    case CoverMap::sum: v = x + y; break;
    case CoverMap::product: v = x * y; break;
    case CoverMap::sum_of_squares: v = x * x + y * y; break;
  }
  const auto centre = static_cast<std::int64_t>(std::floor((v - q_.a) / q_.width));
  for (std::int64_t b = centre - 1; b <= centre + 1; ++b) {
    if (b < 0 || b >= q_.bins) continue;
    auto& h = c.hit[static_cast<std::size_t>(b)];
    if (h.set) continue;
    const double blo = q_.a + static_cast<double>(b) * q_.width;
    if (v < blo - 1e-9 * q_.width || v > blo + q_.width + 1e-9 * q_.width) continue;
    if (exact_in_bin(n, b)) {
      h.set = true;
      h.idx = {n.idx[0], n.idx[1]};
      h.value = v;
    }
  }
}

CoverTally CoverWalker::finish(const std::vector<const LocalCover*>& parts) const {
  CoverTally out;
  out.witness.resize(static_cast<std::size_t>(q_.bins));
  out.possible.assign(static_cast<std::size_t>(q_.bins), 0);
  for (const LocalCover* p : parts) {
    out.nodes += p->nodes;
    for (std::size_t b = 0; b < out.witness.size(); ++b) {
      out.possible[b] = static_cast<char>(out.possible[b] | p->possible[b]);
      if (!out.witness[b] && p->hit[b].set) {
        Node leaf;
        leaf.level = q_.depth;
        leaf.idx[0] = p->hit[b].idx[0];
        leaf.idx[1] = p->hit[b].idx[1];
        out.witness[b] = Witness{exact_point(leaf), p->hit[b].value};
      }
    }
  }
  return out;
}

}  // namespace detail
}  // namespace digitlens::kernels
