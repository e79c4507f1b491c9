#pragma once

#include "digitlens/digit_system.hpp"

#include <cstdint>
#include <vector>

namespace digitlens {

struct SupOptions {
  double tol = 1e-4;
  std::int64_t max_cells = 20'000'000;
  // Use sup f = prod sup f_axis when D is a Cartesian product.
  bool factorize = true;
  int initial_grid = 8;
  bool parallel = true;
};

/// Certified enclosure [lo, hi] of sup over [0,1]^n of f(theta).
struct SupEnclosure {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> argmax;
  std::int64_t cells_explored = 0;
  bool converged = true;
  bool factorized = false;
  double lipschitz = 0.0;
};

// Branch and bound. Per-box bound is the smaller of f(center) + L * radius,
// with L = p^n * 2 pi * R / p and R the centered digit radius, and the
// second-order bound of kernels::f_box.
SupEnclosure sup_f(const DigitSystem& system, const SupOptions& options = {});

// Largest f over the grid {i / m}^n.
struct GridMax {
  double value = 0.0;
  std::vector<double> argmax;
};
GridMax grid_max_f(const DigitSystem& system, int points_per_axis, bool parallel = true);

}  // namespace digitlens
