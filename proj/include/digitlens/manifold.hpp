#pragma once

#include "digitlens/digit_system.hpp"
#include "digitlens/interval.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace digitlens {

/// x -> t g x + v with t > 0 and g orthogonal.
struct SimilarityTransform {
  double t = 1.0;
  std::vector<double> v;
  std::vector<std::vector<double>> g;

  static SimilarityTransform identity(int n);
  static SimilarityTransform rotation2d(double angle);

  int dim() const { return static_cast<int>(v.size()); }
  void validate() const;
  std::array<double, kMaxDim> apply(std::span<const double> x) const;
  std::array<double, kMaxDim> inverse(std::span<const double> y) const;
  // (*this) after `first`.
  SimilarityTransform compose(const SimilarityTransform& first) const;
};

struct Sphere {
  std::vector<double> center;
  double radius = 1.0;
};
// |x|^k + |y - 1|^k = 1
struct Superellipse {
  double k = 2.0;
};
// xy = r on the branch x, y > 0
struct Hyperbola {
  double r = 1.0;
};
// (t, t^2, ..., t^n) for t in [t0, t1]
struct Veronese {
  int n = 3;
  double t0 = 0.0;
  double t1 = 1.0;
};
// Flat piece; plumbing only, not a manifold of finite type.
struct Segment {
  std::vector<double> a;
  std::vector<double> b;
};
struct Monomial {
  double coef = 0.0;
  std::vector<int> powers;
};
// Zero set of a polynomial. Distances are bounded through |F| / sup|grad F|
// within `reach` of the box, so only lower bounds are certified.
struct ImplicitPolynomial {
  std::vector<Monomial> terms;
  double reach = 1.0;
};

using ManifoldShape = std::variant<Sphere, Superellipse, Hyperbola, Veronese, Segment, ImplicitPolynomial>;

class ManifoldSpec {
 public:
  static ManifoldSpec circle(std::vector<double> center, double radius, std::optional<double> sigma = {});
  static ManifoldSpec superellipse(double k, std::optional<double> sigma = {});
  static ManifoldSpec hyperbola(double r, std::optional<double> sigma = {});
  static ManifoldSpec veronese(int n, double t0 = 0.0, double t1 = 1.0, std::optional<double> sigma = {});
  static ManifoldSpec segment(std::vector<double> a, std::vector<double> b);
  static ManifoldSpec implicit(int n, std::vector<Monomial> terms, int dim_m, double sigma, double reach = 1.0);

  const ManifoldShape& shape() const { return shape_; }
  std::string kind() const;
  int ambient_dim() const { return ambient_; }
  int dim() const { return dim_; }
  double sigma() const { return sigma_; }
  const std::optional<SimilarityTransform>& transform() const { return transform_; }

  ManifoldSpec with_transform(const SimilarityTransform& t) const;

 private:
  ManifoldSpec(ManifoldShape shape, int ambient, int dim, double sigma);
  friend ManifoldSpec apply_transform(const ManifoldSpec& m, const SimilarityTransform& t);

  ManifoldShape shape_;
  int ambient_ = 2;
  int dim_ = 1;
  double sigma_ = 0.5;
  std::optional<SimilarityTransform> transform_;
};

enum class Relation { inside, outside, straddle };

const char* to_string(Relation r);

/// Certified enclosure of {dist(x, M) : x in box}.
Interval distance_interval(const ManifoldSpec& m, const Box& box);
Interval point_distance(const ManifoldSpec& m, std::span<const double> x);
// The two halves of distance_interval, for callers that need only one side.
double distance_lower(const ManifoldSpec& m, const Box& box);
double distance_upper(const ManifoldSpec& m, const Box& box);
Relation cell_vs_neighborhood(const ManifoldSpec& m, double delta, const Box& box);
ManifoldSpec apply_transform(const ManifoldSpec& m, const SimilarityTransform& t);

// Absolute accuracy targeted by distance_interval on a box of this size; the
// enclosure is monotone under refinement up to this amount.
double distance_tolerance(const Box& box);

}  // namespace digitlens
