#include "digitlens/manifold.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <queue>

namespace digitlens {

// ---- Interval / Box helpers ------------------------------------------------

Interval ipow(Interval x, int e) {
  if (e == 0) return {1.0, 1.0};
  const double a = std::pow(x.lo, e);
  const double b = std::pow(x.hi, e);
  if (e % 2 == 1) return {a, b};
  if (x.lo >= 0.0) return {a, b};
  if (x.hi <= 0.0) return {b, a};
  return {0.0, std::max(a, b)};
}

Box Box::point(std::span<const double> x) {
  Box b;
  b.n = static_cast<int>(x.size());
  for (int a = 0; a < b.n; ++a) b.lo[static_cast<std::size_t>(a)] = b.hi[static_cast<std::size_t>(a)] = x[static_cast<std::size_t>(a)];
  return b;
}

Box Box::unit(int n) {
  Box b;
  b.n = n;
  for (int a = 0; a < n; ++a) b.hi[static_cast<std::size_t>(a)] = 1.0;
  return b;
}

double Box::max_side() const {
  double s = 0.0;
  for (int a = 0; a < n; ++a) s = std::max(s, side(a));
  return s;
}

double Box::half_diagonal() const {
  double s = 0.0;
  for (int a = 0; a < n; ++a) s += side(a) * side(a);
  return 0.5 * std::sqrt(s);
}

std::array<double, kMaxDim> Box::center() const {
  std::array<double, kMaxDim> c{};
  for (int a = 0; a < n; ++a) c[static_cast<std::size_t>(a)] = 0.5 * (lo[static_cast<std::size_t>(a)] + hi[static_cast<std::size_t>(a)]);
  return c;
}

bool Box::contains(std::span<const double> x) const {
  for (int a = 0; a < n; ++a) {
    auto i = static_cast<std::size_t>(a);
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

double point_box_distance(std::span<const double> x, const Box& b) {
  double s = 0.0;
  for (int a = 0; a < b.n; ++a) {
    auto i = static_cast<std::size_t>(a);
    const double d = std::max({b.lo[i] - x[i], 0.0, x[i] - b.hi[i]});
    s += d * d;
  }
  return std::sqrt(s);
}

double point_box_farthest(std::span<const double> x, const Box& b) {
  double s = 0.0;
  for (int a = 0; a < b.n; ++a) {
    auto i = static_cast<std::size_t>(a);
    const double d = std::max(std::abs(x[i] - b.lo[i]), std::abs(x[i] - b.hi[i]));
    s += d * d;
  }
  return std::sqrt(s);
}

double box_box_distance(const Box& p, const Box& q) {
  double s = 0.0;
  for (int a = 0; a < p.n; ++a) {
    auto i = static_cast<std::size_t>(a);
    const double d = std::max({p.lo[i] - q.hi[i], 0.0, q.lo[i] - p.hi[i]});
    s += d * d;
  }
  return std::sqrt(s);
}

double distance_tolerance(const Box& box) { return std::max(1e-7 * box.max_side(), 1e-14); }

// ---- SimilarityTransform ---------------------------------------------------

SimilarityTransform SimilarityTransform::identity(int n) {
  SimilarityTransform t;
  t.v.assign(static_cast<std::size_t>(n), 0.0);
  t.g.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i) t.g[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
  return t;
}

SimilarityTransform SimilarityTransform::rotation2d(double angle) {
  SimilarityTransform t = identity(2);
  t.g = {{std::cos(angle), -std::sin(angle)}, {std::sin(angle), std::cos(angle)}};
  return t;
}

void SimilarityTransform::validate() const {
  const int n = dim();
  if (!(t > 0.0)) throw Error("SimilarityTransform: scale t must be positive");
  if (n < 1 || n > kMaxDim) throw Error("SimilarityTransform: unsupported dimension");
  if (static_cast<int>(g.size()) != n) throw Error("SimilarityTransform: g must be n x n");
  for (const auto& row : g) {
    if (static_cast<int>(row.size()) != n) throw Error("SimilarityTransform: g must be n x n");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += g[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
      if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-12) throw Error("SimilarityTransform: g is not orthogonal");
    }
  }
}

std::array<double, kMaxDim> SimilarityTransform::apply(std::span<const double> x) const {
  std::array<double, kMaxDim> y{};
  const auto n = static_cast<std::size_t>(dim());
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += g[i][j] * x[j];
    y[i] = t * s + v[i];
  }
  return y;
}

std::array<double, kMaxDim> SimilarityTransform::inverse(std::span<const double> y) const {
  std::array<double, kMaxDim> x{};
  const auto n = static_cast<std::size_t>(dim());
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += g[j][i] * (y[j] - v[j]);
    x[i] = s / t;
  }
  return x;
}

SimilarityTransform SimilarityTransform::compose(const SimilarityTransform& first) const {
  const auto n = static_cast<std::size_t>(dim());
  SimilarityTransform out = identity(dim());
  out.t = t * first.t;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += g[i][k] * first.g[k][j];
      out.g[i][j] = s;
    }
  }
  auto gv = apply(first.v);
  for (std::size_t i = 0; i < n; ++i) out.v[i] = gv[i];
  return out;
}

// ---- ManifoldSpec ----------------------------------------------------------

ManifoldSpec::ManifoldSpec(ManifoldShape shape, int ambient, int dim, double sigma)
    : shape_(std::move(shape)), ambient_(ambient), dim_(dim), sigma_(sigma) {
  if (ambient < 1 || ambient > kMaxDim) throw Error("ManifoldSpec: ambient dimension must be in [1, 4]");
  if (dim < 0 || dim >= ambient) throw Error("ManifoldSpec: manifold dimension must be < ambient dimension");
}

ManifoldSpec ManifoldSpec::circle(std::vector<double> center, double radius, std::optional<double> sigma) {
  const int n = static_cast<int>(center.size());
  if (!(radius > 0.0)) throw Error("circle: radius must be positive");
  const double s = sigma.value_or(n > 1 ? (n - 1) / 2.0 : 0.5);
  if (!(s > 0.0)) throw Error("circle: sigma must be positive");
  return ManifoldSpec(Sphere{std::move(center), radius}, n, n - 1, s);
}

ManifoldSpec ManifoldSpec::superellipse(double k, std::optional<double> sigma) {
  if (!(k >= 2.0)) throw Error("superellipse: k must be >= 2");
  const double s = sigma.value_or(1.0 / k);
  if (!(s > 0.0)) throw Error("superellipse: sigma must be positive");
  return ManifoldSpec(Superellipse{k}, 2, 1, s);
}

ManifoldSpec ManifoldSpec::hyperbola(double r, std::optional<double> sigma) {
  if (!(r > 0.0)) throw Error("hyperbola: r must be positive");
  const double s = sigma.value_or(0.5);
  if (!(s > 0.0)) throw Error("hyperbola: sigma must be positive");
  return ManifoldSpec(Hyperbola{r}, 2, 1, s);
}

ManifoldSpec ManifoldSpec::veronese(int n, double t0, double t1, std::optional<double> sigma) {
  if (n < 2 || n > kMaxDim) throw Error("veronese: n must be in [2, 4]");
  if (!(t0 < t1)) throw Error("veronese: empty parameter interval");
  const double s = sigma.value_or(1.0 / n);
  if (!(s > 0.0)) throw Error("veronese: sigma must be positive");
  return ManifoldSpec(Veronese{n, t0, t1}, n, 1, s);
}

ManifoldSpec ManifoldSpec::segment(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size() || a.empty()) throw Error("segment: endpoints must have equal dimension");
  const int n = static_cast<int>(a.size());
  const int d = (a == b) ? 0 : 1;
  // Flat: there is no Fourier decay, sigma is recorded as 0.
  return ManifoldSpec(Segment{std::move(a), std::move(b)}, n, d, 0.0);
}

ManifoldSpec ManifoldSpec::implicit(int n, std::vector<Monomial> terms, int dim_m, double sigma, double reach) {
  if (terms.empty()) throw Error("implicit: polynomial has no terms");
  for (const auto& t : terms) {
    if (static_cast<int>(t.powers.size()) != n) throw Error("implicit: monomial arity does not match n");
    for (int e : t.powers) {
      if (e < 0) throw Error("implicit: negative exponent");
    }
  }
  if (!(sigma > 0.0)) throw Error("implicit: sigma must be positive");
  if (!(reach > 0.0)) throw Error("implicit: reach must be positive");
  return ManifoldSpec(ImplicitPolynomial{std::move(terms), reach}, n, dim_m, sigma);
}

std::string ManifoldSpec::kind() const {
  static const char* names[] = {"circle", "superellipse", "hyperbola", "veronese", "segment", "implicit"};
  return names[shape_.index()];
}

ManifoldSpec ManifoldSpec::with_transform(const SimilarityTransform& t) const { return apply_transform(*this, t); }

const char* to_string(Relation r) {
  switch (r) {
    case Relation::inside: return "inside";
    case Relation::outside: return "outside";
    case Relation::straddle: return "straddle";
  }
  return "?";
}

namespace {

using Point = std::array<double, kMaxDim>;

enum class PieceKind { super_x, super_y, hyp_x, hyp_y, veronese, segment };

// Curve piece on which every coordinate is monotone in the parameter, so the
// piece lies inside the bounding box of its endpoints.
struct Piece {
  PieceKind kind;
  double t0;
  double t1;
  double sx = 1.0;
  double sy = 1.0;
};

struct CurveContext {
  int n = 2;
  double k = 2.0;  // superellipse exponent
  double r = 1.0;  // hyperbola constant
  Point a{};       // segment
  Point b{};
};

// 1 - (1 - u^k)^{1/k} without cancellation near u = 0.
double superellipse_gap(double u, double k) { return -std::expm1(std::log1p(-std::pow(u, k)) / k); }

Point eval_piece(const Piece& p, const CurveContext& c, double t) {
  Point x{};
  switch (p.kind) {
    case PieceKind::super_x: {
      const double m = superellipse_gap(t, c.k);
      x[0] = p.sx * t;
      x[1] = p.sy < 0 ? m : 2.0 - m;
      break;
    }
    case PieceKind::super_y: {
      const double m = superellipse_gap(t, c.k);
      x[0] = p.sx * (1.0 - m);
      x[1] = 1.0 + p.sy * t;
      break;
    }
    case PieceKind::hyp_x:
      x[0] = t;
      x[1] = c.r / t;
      break;
    case PieceKind::hyp_y:
      x[0] = c.r / t;
      x[1] = t;
      break;
    case PieceKind::veronese: {
      double v = 1.0;
      for (int i = 0; i < c.n; ++i) {
        v *= t;
        x[static_cast<std::size_t>(i)] = v;
      }
      break;
    }
    case PieceKind::segment:
      for (int i = 0; i < c.n; ++i) {
        auto j = static_cast<std::size_t>(i);
        x[j] = c.a[j] + t * (c.b[j] - c.a[j]);
      }
      break;
  }
  return x;
}

Box endpoint_box(const Point& p, const Point& q, int n) {
  Box b;
  b.n = n;
  for (int i = 0; i < n; ++i) {
    auto j = static_cast<std::size_t>(i);
    b.lo[j] = std::min(p[j], q[j]);
    b.hi[j] = std::max(p[j], q[j]);
  }
  return b;
}

// Distance from an axis-aligned box to the segment [p, q]. The squared
// distance is convex and piecewise quadratic in the segment parameter, so it
// is minimised exactly piece by piece.
double segment_box_distance(const Point& p, const Point& q, const Box& box) {
  const int n = box.n;
  auto at = [&](double s) {
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
      auto j = static_cast<std::size_t>(i);
      const double x = p[j] + s * (q[j] - p[j]);
      const double e = x < box.lo[j] ? box.lo[j] - x : (x > box.hi[j] ? x - box.hi[j] : 0.0);
      d2 += e * e;
    }
    return d2;
  };
  std::vector<double> breaks = {0.0, 1.0};
  for (int i = 0; i < n; ++i) {
    auto j = static_cast<std::size_t>(i);
    const double d = q[j] - p[j];
    if (d == 0.0) continue;
    for (double b : {box.lo[j], box.hi[j]}) {
      const double s = (b - p[j]) / d;
      if (s > 0.0 && s < 1.0) breaks.push_back(s);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  double best = std::min(at(0.0), at(1.0));
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double sa = breaks[k], sb = breaks[k + 1];
    const double mid = 0.5 * (sa + sb);
    double A = 0.0, B = 0.0;
    for (int i = 0; i < n; ++i) {
      auto j = static_cast<std::size_t>(i);
      const double d = q[j] - p[j];
      const double x = p[j] + mid * d;
      double bound;
      if (x < box.lo[j]) bound = box.lo[j];
      else if (x > box.hi[j]) bound = box.hi[j];
      else continue;
      A += d * d;
      B += 2.0 * d * (p[j] - bound);
    }
    if (A > 0.0) best = std::min(best, at(std::clamp(-B / (2.0 * A), sa, sb)));
    best = std::min(best, at(sa));
  }
  return std::sqrt(best);
}

// Bound on |gamma(t) - chord(t)| over [t0, t1]: (t1 - t0)^2 / 8 * max |gamma''|.
double sagitta(const Piece& pc, const CurveContext& c, double t0, double t1) {
  const double h2 = (t1 - t0) * (t1 - t0) / 8.0;
  switch (pc.kind) {
    case PieceKind::super_x:
    case PieceKind::super_y: {
      // |y''| = (k-1) u^{k-2} (1-u^k)^{1/k-2}, increasing in u for k >= 2.
      const double u = t1;
      return h2 * (c.k - 1.0) * std::pow(u, c.k - 2.0) * std::pow(1.0 - std::pow(u, c.k), 1.0 / c.k - 2.0);
    }
    case PieceKind::hyp_x:
    case PieceKind::hyp_y: return h2 * 2.0 * c.r / (t0 * t0 * t0);
    case PieceKind::veronese: {
      const double m = std::max(std::abs(t0), std::abs(t1));
      double sq = 0.0;
      for (int i = 2; i <= c.n; ++i) {
        const double d2 = i * (i - 1) * std::pow(m, i - 2);
        sq += d2 * d2;
      }
      return h2 * std::sqrt(sq);
    }
    case PieceKind::segment: return 0.0;
  }
  return std::numeric_limits<double>::infinity();
}

// Lower bound for the distance from the box to the piece over [t0, t1].
double piece_lower(const Piece& pc, const CurveContext& c, double t0, double t1, const Point& p0, const Point& p1,
                   const Box& box) {
  const double bbox = box_box_distance(endpoint_box(p0, p1, c.n), box);
  const double chord = segment_box_distance(p0, p1, box) - sagitta(pc, c, t0, t1) * (1.0 + 1e-9);
  return std::max(bbox, chord);
}

struct MinDistance {
  double lo;
  double hi;
};

// Branch and bound over the curve parameter for min_t dist(gamma(t), box).
MinDistance curve_min_distance(const std::vector<Piece>& pieces, const CurveContext& c, const Box& box, double tol) {
  struct Node {
    double lb;
    std::size_t piece;
    double t0, t1;
    Point p0, p1;
    bool operator>(const Node& o) const { return lb > o.lb; }
  };
  std::priority_queue<Node, std::vector<Node>, std::greater<>> heap;
  double upper = std::numeric_limits<double>::infinity();
  auto pd = [&](const Point& p) { return point_box_distance(std::span<const double>(p.data(), static_cast<std::size_t>(c.n)), box); };
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& pc = pieces[i];
    Point p0 = eval_piece(pc, c, pc.t0);
    Point p1 = eval_piece(pc, c, pc.t1);
    upper = std::min({upper, pd(p0), pd(p1)});
    heap.push({piece_lower(pc, c, pc.t0, pc.t1, p0, p1, box), i, pc.t0, pc.t1, p0, p1});
  }
  constexpr int kMaxIter = 200000;
  for (int it = 0; it < kMaxIter && !heap.empty(); ++it) {
    Node top = heap.top();
    if (top.lb >= upper - tol) break;
    heap.pop();
    const double tm = 0.5 * (top.t0 + top.t1);
    if (!(tm > top.t0 && tm < top.t1)) {
      // Parameter interval exhausted at double resolution: endpoints are exact.
      upper = std::min({upper, pd(top.p0), pd(top.p1)});
      continue;
    }
    Point pm = eval_piece(pieces[top.piece], c, tm);
    upper = std::min(upper, pd(pm));
    const Piece& pc = pieces[top.piece];
    heap.push({std::max(top.lb, piece_lower(pc, c, top.t0, tm, top.p0, pm, box)), top.piece, top.t0, tm, top.p0, pm});
    heap.push({std::max(top.lb, piece_lower(pc, c, tm, top.t1, pm, top.p1, box)), top.piece, tm, top.t1, pm, top.p1});
  }
  const double lo = heap.empty() ? upper : std::min(heap.top().lb, upper);
  return {lo, upper};
}

// Pieces covering every part of the curve that can be nearest to `box`.
std::vector<Piece> curve_pieces(const ManifoldShape& shape, const Box& box, CurveContext& c) {
  std::vector<Piece> pieces;
  if (const auto* s = std::get_if<Superellipse>(&shape)) {
    c.n = 2;
    c.k = s->k;
    const double cut = std::pow(2.0, -1.0 / s->k);
    for (double sx : {-1.0, 1.0}) {
      for (double sy : {-1.0, 1.0}) {
        pieces.push_back({PieceKind::super_x, 0.0, cut, sx, sy});
        pieces.push_back({PieceKind::super_y, 0.0, cut, sx, sy});
      }
    }
  } else if (const auto* h = std::get_if<Hyperbola>(&shape)) {
    c.n = 2;
    c.r = h->r;
    const double sr = std::sqrt(h->r);
    const Point vertex{sr, sr, 0.0, 0.0};
    const double u = point_box_distance(std::span<const double>(vertex.data(), 2), box);
    const double xs = std::max(box.hi[0], 0.0) + u + 1.0;
    const double ys = std::max(box.hi[1], 0.0) + u + 1.0;
    pieces.push_back({PieceKind::hyp_x, sr, std::max(xs, sr)});
    pieces.push_back({PieceKind::hyp_y, sr, std::max(ys, sr)});
  } else if (const auto* v = std::get_if<Veronese>(&shape)) {
    c.n = v->n;
    if (v->t0 < 0.0 && v->t1 > 0.0) {
      pieces.push_back({PieceKind::veronese, v->t0, 0.0});
      pieces.push_back({PieceKind::veronese, 0.0, v->t1});
    } else {
      pieces.push_back({PieceKind::veronese, v->t0, v->t1});
    }
  } else if (const auto* g = std::get_if<Segment>(&shape)) {
    c.n = static_cast<int>(g->a.size());
    for (int i = 0; i < c.n; ++i) {
      c.a[static_cast<std::size_t>(i)] = g->a[static_cast<std::size_t>(i)];
      c.b[static_cast<std::size_t>(i)] = g->b[static_cast<std::size_t>(i)];
    }
    pieces.push_back({PieceKind::segment, 0.0, 1.0});
  }
  return pieces;
}

double rounding_slack(const Box& box) {
  double m = 1.0;
  for (int a = 0; a < box.n; ++a) {
    m = std::max({m, std::abs(box.lo[static_cast<std::size_t>(a)]), std::abs(box.hi[static_cast<std::size_t>(a)])});
  }
  return 8.0 * DBL_EPSILON * m;
}

Interval eval_poly(const ImplicitPolynomial& f, const Box& box) {
  Interval s{0.0, 0.0};
  for (const auto& t : f.terms) {
    Interval m{t.coef, t.coef};
    for (int a = 0; a < box.n; ++a) {
      auto i = static_cast<std::size_t>(a);
      if (t.powers[i] > 0) m = m * ipow(Interval{box.lo[i], box.hi[i]}, t.powers[i]);
    }
    s = s + m;
  }
  return widen(s);
}

double poly_gradient_bound(const ImplicitPolynomial& f, const Box& box) {
  double sq = 0.0;
  for (int d = 0; d < box.n; ++d) {
    Interval s{0.0, 0.0};
    for (const auto& t : f.terms) {
      const int e = t.powers[static_cast<std::size_t>(d)];
      if (e == 0) continue;
      Interval m{t.coef * e, t.coef * e};
      for (int a = 0; a < box.n; ++a) {
        auto i = static_cast<std::size_t>(a);
        const int ea = (a == d) ? e - 1 : t.powers[i];
        if (ea > 0) m = m * ipow(Interval{box.lo[i], box.hi[i]}, ea);
      }
      s = s + m;
    }
    sq += s.mag() * s.mag();
  }
  return std::sqrt(sq) * (1.0 + 1e-12);
}

// Bounding box of T^{-1}(box).
Box pull_back(const SimilarityTransform& t, const Box& box) {
  const auto c = box.center();
  const auto cc = t.inverse(std::span<const double>(c.data(), static_cast<std::size_t>(box.n)));
  Box out;
  out.n = box.n;
  for (int i = 0; i < box.n; ++i) {
    double e = 0.0;
    for (int j = 0; j < box.n; ++j) {
      e += std::abs(t.g[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) * 0.5 * box.side(j);
    }
    e = e / t.t * (1.0 + 1e-12);
    out.lo[static_cast<std::size_t>(i)] = cc[static_cast<std::size_t>(i)] - e;
    out.hi[static_cast<std::size_t>(i)] = cc[static_cast<std::size_t>(i)] + e;
  }
  return out;
}

double shape_lower(const ManifoldShape& shape, const Box& box) {
  const double eps = rounding_slack(box);
  if (const auto* s = std::get_if<Sphere>(&shape)) {
    const double a = point_box_distance(s->center, box);
    const double b = point_box_farthest(s->center, box);
    if (a <= s->radius && s->radius <= b) return 0.0;
    return std::max(0.0, std::min(std::abs(a - s->radius), std::abs(b - s->radius)) - eps);
  }
  if (const auto* f = std::get_if<ImplicitPolynomial>(&shape)) {
    Box grown = box;
    for (int a = 0; a < box.n; ++a) {
      grown.lo[static_cast<std::size_t>(a)] -= f->reach;
      grown.hi[static_cast<std::size_t>(a)] += f->reach;
    }
    const double mig = eval_poly(*f, box).mig();
    if (mig == 0.0) return 0.0;
    const double g = poly_gradient_bound(*f, grown);
    if (g == 0.0) return f->reach;
    return std::min(f->reach, mig / g * (1.0 - 1e-12));
  }
  CurveContext c;
  auto pieces = curve_pieces(shape, box, c);
  auto md = curve_min_distance(pieces, c, box, distance_tolerance(box));
  return std::max(0.0, md.lo - eps);
}

double shape_upper(const ManifoldShape& shape, const Box& box) {
  const double eps = rounding_slack(box);
  if (const auto* s = std::get_if<Sphere>(&shape)) {
    const double a = point_box_distance(s->center, box);
    const double b = point_box_farthest(s->center, box);
    return std::max(std::abs(a - s->radius), std::abs(b - s->radius)) + eps;
  }
  if (std::holds_alternative<ImplicitPolynomial>(shape)) return std::numeric_limits<double>::infinity();
  const auto ctr = box.center();
  const Box p = Box::point(std::span<const double>(ctr.data(), static_cast<std::size_t>(box.n)));
  CurveContext c;
  auto pieces = curve_pieces(shape, p, c);
  auto md = curve_min_distance(pieces, c, p, distance_tolerance(box));
  return md.hi + box.half_diagonal() + eps;
}

void check_dim(const ManifoldSpec& m, const Box& box) {
  if (box.n != m.ambient_dim()) {
    throw Error("distance_interval: box dimension " + std::to_string(box.n) + " does not match manifold dimension " +
                std::to_string(m.ambient_dim()));
  }
}

double lower_distance(const ManifoldSpec& m, const Box& box) {
  if (m.transform()) {
    const auto& t = *m.transform();
    return t.t * shape_lower(m.shape(), pull_back(t, box)) * (1.0 - 1e-15);
  }
  return shape_lower(m.shape(), box);
}

double upper_distance(const ManifoldSpec& m, const Box& box) {
  if (m.transform()) {
    const auto& t = *m.transform();
    return t.t * shape_upper(m.shape(), pull_back(t, box)) * (1.0 + 1e-15);
  }
  return shape_upper(m.shape(), box);
}

}  // namespace

Interval distance_interval(const ManifoldSpec& m, const Box& box) {
  check_dim(m, box);
  return {lower_distance(m, box), upper_distance(m, box)};
}

double distance_lower(const ManifoldSpec& m, const Box& box) {
  check_dim(m, box);
  return lower_distance(m, box);
}

double distance_upper(const ManifoldSpec& m, const Box& box) {
  check_dim(m, box);
  return upper_distance(m, box);
}

Interval point_distance(const ManifoldSpec& m, std::span<const double> x) {
  return distance_interval(m, Box::point(x));
}

Relation cell_vs_neighborhood(const ManifoldSpec& m, double delta, const Box& box) {
  check_dim(m, box);
  if (lower_distance(m, box) > delta) return Relation::outside;
  return upper_distance(m, box) <= delta ? Relation::inside : Relation::straddle;
}

ManifoldSpec apply_transform(const ManifoldSpec& m, const SimilarityTransform& t) {
  t.validate();
  if (t.dim() != m.ambient_dim()) throw Error("apply_transform: transform dimension does not match manifold");
  ManifoldSpec out = m;
  if (const auto* s = std::get_if<Sphere>(&m.shape())) {
    // Spheres stay spheres: center -> T(center), radius -> t * radius.
    const auto c = t.apply(s->center);
    Sphere moved{std::vector<double>(c.begin(), c.begin() + m.ambient_dim()), t.t * s->radius};
    out.shape_ = moved;
    return out;
  }
  out.transform_ = m.transform() ? t.compose(*m.transform()) : t;
  return out;
}

}  // namespace digitlens
