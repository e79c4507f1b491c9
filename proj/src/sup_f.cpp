#include "digitlens/sup_f.hpp"

#include "digitlens/fourier.hpp"
#include "digitlens/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace digitlens {
namespace {

SupEnclosure branch_and_bound(const DigitSystem& system, const SupOptions& o) {
  const int n = system.dim();
  const auto nn = static_cast<std::size_t>(n);
  const double p = system.base();
  kernels::DigitTable table(system);
  SupEnclosure out;
  out.lipschitz = std::pow(p, n) * 2.0 * std::numbers::pi * centered_digit_radius(system) / p;
  const double ceiling = std::pow(p, n);

  const int m = std::max(1, o.initial_grid);
  double width = 1.0 / m;
  std::vector<double> corners;
  {
    std::int64_t total = 1;
    for (int a = 0; a < n; ++a) total *= m;
    for (std::int64_t i = 0; i < total; ++i) {
      std::int64_t r = i;
      for (int a = 0; a < n; ++a) {
        corners.push_back(static_cast<double>(r % m) / m);
        r /= m;
      }
    }
  }

  double lo = -std::numeric_limits<double>::infinity();
  double settled = -std::numeric_limits<double>::infinity();
  std::vector<double> centers;
  while (!corners.empty()) {
    const std::size_t count = corners.size() / nn;
    centers.resize(corners.size());
    for (std::size_t i = 0; i < corners.size(); ++i) centers[i] = corners[i] + 0.5 * width;
    const auto boxes = o.parallel ? kernels::omp::f_box_batch(table, centers, 0.5 * width)
                                  : kernels::serial::f_box_batch(table, centers, 0.5 * width);
    out.cells_explored += static_cast<std::int64_t>(count);
    for (std::size_t i = 0; i < count; ++i) {
      if (boxes[i].value > lo) {
        lo = boxes[i].value;
        out.argmax.assign(centers.begin() + static_cast<std::ptrdiff_t>(i * nn),
                          centers.begin() + static_cast<std::ptrdiff_t>((i + 1) * nn));
      }
    }
    const bool over_budget = out.cells_explored > o.max_cells;
    std::vector<double> next;
    for (std::size_t i = 0; i < count; ++i) {
      const double ub = std::min(boxes[i].upper, ceiling);
      if (ub < lo) continue;
      if (ub - lo <= o.tol || over_budget) {
        settled = std::max(settled, ub);
        if (ub - lo > o.tol) out.converged = false;
        continue;
      }
      // Split into 2^n halves.
      for (int child = 0; child < (1 << n); ++child) {
        for (int a = 0; a < n; ++a) {
          const double c = corners[i * nn + static_cast<std::size_t>(a)];
          next.push_back(c + (((child >> a) & 1) ? 0.5 * width : 0.0));
        }
      }
    }
    corners = std::move(next);
    width *= 0.5;
  }
  out.lo = lo;
  out.hi = std::max(lo, settled);
  return out;
}

}  // namespace

SupEnclosure sup_f(const DigitSystem& system, const SupOptions& options) {
  if (!(options.tol > 0.0)) throw Error("sup_f: tol must be positive");
  if (system.dim() > kMaxDim) throw Error("sup_f: dimensions above 4 are not supported");
  const int n = system.dim();
  if (options.factorize && n > 1 && system.is_product()) {
    // f(theta) = prod_a f_a(theta_a) when D is a Cartesian product.
    SupOptions sub = options;
    sub.tol = options.tol / (n * std::pow(static_cast<double>(system.base()), n - 1));
    SupEnclosure out;
    out.lo = 1.0;
    out.hi = 1.0;
    out.factorized = true;
    for (int a = 0; a < n; ++a) {
      auto e = branch_and_bound(DigitSystem::one_dim(system.base(), system.axis_digits(a)), sub);
      out.lo *= e.lo;
      out.hi *= e.hi;
      out.cells_explored += e.cells_explored;
      out.converged = out.converged && e.converged;
      out.argmax.push_back(e.argmax.front());
      out.lipschitz = std::max(out.lipschitz, e.lipschitz);
    }
    return out;
  }
  return branch_and_bound(system, options);
}

GridMax grid_max_f(const DigitSystem& system, int points_per_axis, bool parallel) {
  if (points_per_axis < 1) throw Error("grid_max_f: need at least one point per axis");
  kernels::DigitTable t(system);
  GridMax g;
  g.value = parallel ? kernels::omp::grid_max(t, points_per_axis, g.argmax)
                     : kernels::serial::grid_max(t, points_per_axis, g.argmax);
  return g;
}

}  // namespace digitlens
