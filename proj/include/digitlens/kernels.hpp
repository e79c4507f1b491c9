#pragma once

// Hot loops, each in two builds: a plain serial reference and an OpenMP
// version. Both must produce identical results; the tests compare them.

#include "digitlens/cell_tree.hpp"
#include "digitlens/digit_system.hpp"
#include "digitlens/interval.hpp"
#include "digitlens/manifold.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace digitlens::kernels {

/// Digit set as doubles, laid out for the Fourier loops.
struct DigitTable {
  explicit DigitTable(const DigitSystem& system);

  int base;
  int dim;
  std::size_t count;
  std::vector<double> digits;  // count x dim
  double max_norm;             // max |d|_2
  std::vector<double> centred;  // digits minus the per-axis midpoint
  double radius;                // max |d - mid|_2
};

std::complex<double> g_eval(const DigitTable& t, const double* xi);
double abs_g(const DigitTable& t, const double* xi);
double f_eval(const DigitTable& t, const double* theta);

struct FBox {
  double value = 0.0;  // f at the centre
  double upper = 0.0;  // upper bound for f on the box
};

// Box = centre +- half in every coordinate. Each term |g| is expanded to
// second order; linear parts of well-conditioned terms are summed before
// bounding, so the bound is tight near smooth maxima.
FBox f_box(const DigitTable& t, const double* centre, double half);

struct TermSum {
  double value = 0.0;
  double errbar = 0.0;
  std::int64_t terms = 0;
};

// ---- cell-tree counting --------------------------------------------------

// Half-open index range [lo, hi) per axis at the query depth.
struct IndexWindow {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

struct CountQuery {
  const CellTree* tree = nullptr;
  const ManifoldSpec* manifold = nullptr;
  double delta = 0.0;
  int depth = 0;
  std::vector<IndexWindow> window;  // empty = whole tree
  std::int64_t max_nodes = 50'000'000;
};

struct CountTally {
  std::uint64_t inside = 0;
  std::uint64_t straddle = 0;
  std::int64_t nodes = 0;

  CountTally& operator+=(const CountTally& o);
  bool operator==(const CountTally&) const = default;
};

// ---- coverage --------------------------------------------------------------

enum class CoverMap { pinned_distance, sum, product, sum_of_squares };

struct CoverQuery {
  const CellTree* tree = nullptr;  // two-dimensional
  CoverMap map = CoverMap::sum;
  std::array<double, 2> pin{};
  std::array<Rational, 2> pin_exact;
  int depth = 0;
  double a = 0.0;
  double width = 0.0;
  std::int64_t bins = 0;
  std::vector<Rational> edges;  // bins + 1 exact edges
  std::int64_t max_nodes = 50'000'000;
};

struct Witness {
  std::array<Rational, 2> point;
  double value = 0.0;
};

struct CoverTally {
  std::vector<std::optional<Witness>> witness;  // per bin
  std::vector<char> possible;                   // per bin: some cell image meets it
  std::int64_t nodes = 0;
};

namespace serial {
std::vector<double> f_batch(const DigitTable& t, std::span<const double> thetas);
std::vector<FBox> f_box_batch(const DigitTable& t, std::span<const double> centres, double half);
double grid_max(const DigitTable& t, int points_per_axis, std::vector<double>& argmax);
TermSum partial_sum(const DigitTable& t, int k, std::span<const double> theta, double term_tol, int power);
CountTally count_tree(const CountQuery& q);
CoverTally cover(const CoverQuery& q);
}  // namespace serial

namespace omp {
std::vector<double> f_batch(const DigitTable& t, std::span<const double> thetas);
std::vector<FBox> f_box_batch(const DigitTable& t, std::span<const double> centres, double half);
double grid_max(const DigitTable& t, int points_per_axis, std::vector<double>& argmax);
TermSum partial_sum(const DigitTable& t, int k, std::span<const double> theta, double term_tol, int power);
CountTally count_tree(const CountQuery& q);
CoverTally cover(const CoverQuery& q);
}  // namespace omp

}  // namespace digitlens::kernels
