#include "digitlens/counting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace digitlens {

std::int64_t default_max_nodes() {
  if (const char* env = std::getenv("DIGITLENS_MAX_NODES")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end == env || *end != '\0' || v <= 0) throw Error("DIGITLENS_MAX_NODES must be a positive integer");
    return v;
  }
  return 50'000'000;
}

CountResult count_cells_near(const CellTree& tree, const ManifoldSpec& m, double delta, int depth,
                             const CountOptions& options) {
  if (!(delta > 0.0)) throw Error("count_cells_near: delta must be positive");
  if (depth < 0) throw Error("count_cells_near: depth must be nonnegative");
  if (m.ambient_dim() != tree.dim()) throw Error("count_cells_near: manifold and system dimensions differ");
  for (int a = 0; a < tree.dim(); ++a) {
    if (std::pow(static_cast<double>(tree.base(a)), -depth) > delta * (1.0 + 1e-12)) {
      throw Error("count_cells_near: cells at depth " + std::to_string(depth) +
                  " are larger than delta; increase depth");
    }
  }
  if (!options.window.empty() && options.window.size() != static_cast<std::size_t>(tree.dim())) {
    throw Error("count_cells_near: index window must have one range per axis");
  }
  kernels::CountQuery q;
  q.tree = &tree;
  q.manifold = &m;
  q.delta = delta;
  q.depth = depth;
  q.window = options.window;
  q.max_nodes = options.max_nodes > 0 ? options.max_nodes : default_max_nodes();
  const auto t = options.parallel ? kernels::omp::count_tree(q) : kernels::serial::count_tree(q);

  CountResult r;
  r.delta = delta;
  r.depth = depth;
  r.inside = t.inside;
  r.straddle = t.straddle;
  r.nodes = t.nodes;
  const Rational mass = tree.cell_mass(depth);
  r.measure_lower = mass * BigInt(t.inside);
  r.measure_upper = mass * (BigInt(t.inside) + BigInt(t.straddle));
  return r;
}

ScalingFit fit_exponent(const std::vector<ScalingPoint>& points) {
  if (points.size() < 3) throw Error("fit_exponent: need at least 3 points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].delta > 0.0)) throw Error("fit_exponent: delta must be positive");
    if (!(points[i].value > 0.0)) {
      throw Error("fit_exponent: nonpositive value at delta=" + std::to_string(points[i].delta));
    }
    if (i > 0 && !(points[i].delta < points[i - 1].delta)) {
      throw Error("fit_exponent: deltas must be strictly decreasing");
    }
  }
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0;
  for (const auto& pt : points) {
    sx += std::log(1.0 / pt.delta);
    sy += std::log(pt.value);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& pt : points) {
    const double dx = std::log(1.0 / pt.delta) - mx, dy = std::log(pt.value) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  ScalingFit f;
  f.points = points;
  f.exponent = sxy / sxx;
  f.intercept = my - f.exponent * mx;
  double ss_res = 0;
  for (const auto& pt : points) {
    const double r = std::log(pt.value) - (f.intercept + f.exponent * std::log(1.0 / pt.delta));
    f.residuals.push_back(r);
    ss_res += r * r;
  }
  f.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

namespace {

double ladder_delta(const CellTree& tree, int k) { return std::pow(static_cast<double>(tree.max_base()), -k); }

}  // namespace

ScalingReport neighborhood_measure_scaling(const CellTree& tree, const ManifoldSpec& m, const std::vector<int>& ks,
                                           int depth_offset, const CountOptions& options) {
  if (!std::is_sorted(ks.begin(), ks.end()) || std::adjacent_find(ks.begin(), ks.end()) != ks.end()) {
    throw Error("neighborhood_measure_scaling: ladder exponents must be strictly increasing");
  }
  if (depth_offset < 0) throw Error("neighborhood_measure_scaling: depth offset must be nonnegative");
  ScalingReport rep;
  rep.target = tree.dim() - m.dim();
  std::vector<ScalingPoint> pts;
  for (int k : ks) {
    const double delta = ladder_delta(tree, k);
    rep.rows.push_back(count_cells_near(tree, m, delta, k + depth_offset, options));
    const double upper = to_double(rep.rows.back().measure_upper);
    rep.ratios.push_back(upper / std::pow(delta, rep.target));
    pts.push_back({delta, upper});
  }
  const auto [lo, hi] = std::minmax_element(rep.ratios.begin(), rep.ratios.end());
  if (rep.ratios.empty() || *lo <= 0.0) {
    rep.degenerate = true;
    rep.note = "degenerate: zero mass";
    return rep;
  }
  rep.ratio_spread = *hi / *lo;
  if (pts.size() >= 3) {
    rep.fit = fit_exponent(pts);
    rep.decay_exponent = -rep.fit->exponent;
  } else {
    rep.note = "fewer than 3 ladder points; no fit";
  }
  return rep;
}

SharpnessResult sharpness_first_row(int p, int m1, int m2, int k, int l, double c, const CountOptions& options) {
  if (p < 3) throw Error("sharpness_first_row: p must be at least 3");
  if (m1 <= 0 || m1 >= p - 1 || m2 <= 0 || m2 >= p - 1) {
    throw Error("sharpness_first_row: digit prefixes {0..m} need 0 < m < p-1");
  }
  if (k < 2) throw Error("sharpness_first_row: contact order k must be at least 2");
  if (l < 0) throw Error("sharpness_first_row: l must be nonnegative");
  if (!(c > 0.0)) throw Error("sharpness_first_row: c must be positive");
  auto prefix = [&](int m) {
    std::vector<int> d(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) d[static_cast<std::size_t>(i)] = i;
    return DigitSystem::one_dim(p, d);
  };
  const CellTree tree(ProductSystem({prefix(m1), prefix(m2)}));
  const ManifoldSpec curve = ManifoldSpec::superellipse(k);

  SharpnessResult r;
  r.p = p;
  r.k = k;
  r.l = l;
  r.c = c;
  r.depth = k * l;
  r.delta = std::pow(static_cast<double>(p), -r.depth);
  CountOptions o = options;
  const std::int64_t row = tree.scale(0, (k - 1) * l);
  o.window = {{0, row}, {0, 1}};
  const auto res = count_cells_near(tree, curve, r.delta, r.depth, o);
  r.count = res.meeting();
  r.nodes = res.nodes;
  // (p^{l(k-1)})^{log(m1+1)/log p} = (m1+1)^{l(k-1)}
  r.prediction = std::pow(static_cast<double>(m1 + 1), l * (k - 1));
  r.pass = static_cast<double>(r.count) >= c * r.prediction;
  return r;
}

LSearchResult l_search(const DigitSystem& system, const ManifoldSpec& m, const std::vector<int>& ks, double c,
                       int l_max, const CountOptions& options) {
  if (ks.empty()) throw Error("l_search: empty delta ladder");
  if (!(c > 0.0)) throw Error("l_search: threshold must be positive");
  if (l_max < 0) throw Error("l_search: l_max must be nonnegative");
  LSearchResult out;
  out.exponent = hausdorff_dim(system) + m.dim() - system.dim();
  if (out.exponent <= 0.0) {
    out.applicable = false;
    out.note = "not applicable: dim_H K + dim M <= n";
    return out;
  }
  for (int l = 0; l <= l_max; ++l) {
    const CellTree tree(system.with_free_prefix(l));
    LSearchLevel lv;
    lv.l = l;
    lv.pass = true;
    for (int k : ks) {
      const double delta = std::pow(static_cast<double>(system.base()), -k);
      const auto r = count_cells_near(tree, m, delta, k, options);
      lv.deltas.push_back(delta);
      lv.counts.push_back(r.meeting());
      lv.required.push_back(c * std::pow(1.0 / delta, out.exponent));
      if (static_cast<double>(r.meeting()) < lv.required.back()) lv.pass = false;
    }
    out.levels.push_back(std::move(lv));
    if (out.levels.back().pass) {
      out.l = l;
      return out;
    }
  }
  out.note = "l_max exhausted without a passing level";
  return out;
}

std::vector<SweepRow> transform_sweep(const CellTree& tree, const ManifoldSpec& m,
                                      const std::vector<SimilarityTransform>& grid, const std::vector<int>& ks,
                                      const SweepOptions& options) {
  if (ks.empty()) throw Error("transform_sweep: empty delta ladder");
  std::vector<SweepRow> rows;
  for (const auto& t : grid) {
    const ManifoldSpec moved = apply_transform(m, t);
    const auto rep = neighborhood_measure_scaling(tree, moved, ks, options.depth_offset, options.count);
    SweepRow row;
    row.transform = t;
    for (const auto& c : rep.rows) row.deltas.push_back(c.delta);
    row.ratios = rep.ratios;
    row.ratio = rep.ratios.back();
    row.bounded_away = std::all_of(row.ratios.begin(), row.ratios.end(),
                                   [&](double v) { return v >= options.threshold; });
    if (!rep.degenerate && rep.fit) row.trend = rep.fit->exponent + rep.target;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace digitlens
