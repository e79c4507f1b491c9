#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>

namespace digitlens {

constexpr int kMaxDim = 4;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return lo <= x && x <= hi; }
  double width() const { return hi - lo; }
  // Smallest absolute value over the interval.
  double mig() const { return (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(std::abs(lo), std::abs(hi)); }
  double mag() const { return std::max(std::abs(lo), std::abs(hi)); }
};

inline Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Interval operator-(Interval a, Interval b) { return {a.lo - b.hi, a.hi - b.lo}; }
inline Interval operator*(Interval a, Interval b) {
  const double c[] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}
inline Interval operator*(double s, Interval a) { return s >= 0 ? Interval{s * a.lo, s * a.hi} : Interval{s * a.hi, s * a.lo}; }

Interval ipow(Interval x, int e);

// Outward widening by a few ulps on each side.
inline Interval widen(Interval x) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {std::nextafter(std::nextafter(x.lo, -inf), -inf), std::nextafter(std::nextafter(x.hi, inf), inf)};
}

/// Closed axis-aligned box in R^n, n <= kMaxDim.
struct Box {
  int n = 0;
  std::array<double, kMaxDim> lo{};
  std::array<double, kMaxDim> hi{};

  static Box point(std::span<const double> x);
  static Box unit(int n);

  double side(int a) const { return hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)]; }
  double max_side() const;
  double half_diagonal() const;
  std::array<double, kMaxDim> center() const;
  bool contains(std::span<const double> x) const;
};

// Euclidean distance from a point to a box (0 inside).
double point_box_distance(std::span<const double> x, const Box& b);
// Distance from a point to the farthest point of a box.
double point_box_farthest(std::span<const double> x, const Box& b);
double box_box_distance(const Box& a, const Box& b);

}  // namespace digitlens
