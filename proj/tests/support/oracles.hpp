#pragma once

// Independent reference computations. None of these call the library code
// they are used to check; they are slow and direct on purpose.

#include "digitlens/cell_tree.hpp"
#include "digitlens/manifold.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

using Digits = std::vector<std::vector<int>>;

inline std::complex<double> g(const Digits& D, const std::vector<double>& xi) {
  std::complex<double> s = 0.0;
  for (const auto& d : D) {
    double dot = 0.0;
    for (std::size_t a = 0; a < xi.size(); ++a) dot += d[a] * xi[a];
    s += std::polar(1.0, -2.0 * std::numbers::pi * dot);
  }
  return s / static_cast<double>(D.size());
}

// prod_{j < terms} g(xi / p^j)
inline std::complex<double> lambda_hat(const Digits& D, int p, std::vector<double> xi, int terms = 60) {
  std::complex<double> v = 1.0;
  for (int j = 0; j < terms; ++j) {
    v *= g(D, xi);
    for (auto& x : xi) x /= p;
  }
  return v;
}

inline double f(const Digits& D, int p, const std::vector<double>& theta) {
  const std::size_t n = theta.size();
  std::vector<int> i(n, 0);
  double s = 0.0;
  while (true) {
    std::vector<double> xi(n);
    for (std::size_t a = 0; a < n; ++a) xi[a] = (i[a] + theta[a]) / p;
    s += std::abs(g(D, xi));
    std::size_t a = 0;
    while (a < n && ++i[a] == p) i[a++] = 0;
    if (a == n) break;
  }
  return s;
}

// Max of f over the grid {j/m}^n.
inline double grid_sup_f(const Digits& D, int p, int n, int m) {
  double best = 0.0;
  std::vector<int> j(static_cast<std::size_t>(n), 0);
  while (true) {
    std::vector<double> th(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) th[static_cast<std::size_t>(a)] = static_cast<double>(j[static_cast<std::size_t>(a)]) / m;
    best = std::max(best, f(D, p, th));
    int a = 0;
    while (a < n && ++j[static_cast<std::size_t>(a)] == m) j[static_cast<std::size_t>(a++)] = 0;
    if (a == n) break;
  }
  return best;
}

struct Cell {
  std::vector<std::int64_t> idx;  // integer corner at depth k
  int depth = 0;
};

// Every admissible depth-k cell, by brute-force odometer over digit strings.
inline std::vector<Cell> all_cells(const std::vector<int>& bases, const std::vector<Digits>& per_level_digits,
                                   int k) {
  std::vector<Cell> out{Cell{std::vector<std::int64_t>(bases.size(), 0), 0}};
  for (int j = 0; j < k; ++j) {
    const Digits& D = per_level_digits[std::min<std::size_t>(static_cast<std::size_t>(j), per_level_digits.size() - 1)];
    std::vector<Cell> next;
    for (const auto& c : out) {
      for (const auto& d : D) {
        Cell e = c;
        for (std::size_t a = 0; a < bases.size(); ++a) e.idx[a] = c.idx[a] * bases[a] + d[a];
        e.depth = j + 1;
        next.push_back(e);
      }
    }
    out = std::move(next);
  }
  return out;
}

inline digitlens::Box box_of(const Cell& c, const std::vector<int>& bases) {
  digitlens::Box b;
  b.n = static_cast<int>(bases.size());
  for (std::size_t a = 0; a < bases.size(); ++a) {
    const double s = std::pow(static_cast<double>(bases[a]), c.depth);
    b.lo[a] = static_cast<double>(c.idx[a]) / s;
    b.hi[a] = static_cast<double>(c.idx[a] + 1) / s;
  }
  return b;
}

// Area of {x in [0,1]^2 : |dist(x, c) - r| <= delta}, by integrating the
// vertical extent of the annulus over x (midpoint rule).
inline double clipped_annulus_area(double cx, double cy, double r, double delta, int steps = 200000) {
  auto chord = [&](double R, double x) -> std::pair<double, double> {
    const double dx = x - cx;
    if (R <= 0 || std::abs(dx) >= R) return {0.0, 0.0};
    const double h = std::sqrt(R * R - dx * dx);
    return {cy - h, cy + h};
  };
  auto clip_len = [](double lo, double hi) { return std::max(0.0, std::min(hi, 1.0) - std::max(lo, 0.0)); };
  double area = 0.0;
  const double h = 1.0 / steps;
  for (int i = 0; i < steps; ++i) {
    const double x = (i + 0.5) * h;
    const auto [olo, ohi] = chord(r + delta, x);
    const auto [ilo, ihi] = chord(r - delta, x);
    double len = clip_len(olo, ohi);
    if (ihi > ilo) len -= clip_len(ilo, ihi);
    area += len * h;
  }
  return area;
}

}  // namespace oracle
