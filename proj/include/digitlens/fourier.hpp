#pragma once

#include "digitlens/digit_system.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace digitlens {

/// A frequency xi + theta with integer lattice part and offset in [0,1]^n.
struct FrequencyPoint {
  std::vector<std::int64_t> lattice;
  std::vector<double> offset;

  std::vector<double> value() const;
};

struct TransformValue {
  std::complex<double> value;
  double error_bound = 0.0;  // certified truncation error
  int terms = 0;             // number of factors multiplied
};

struct PartialSum {
  int k = 0;
  std::vector<double> theta;
  double value = 0.0;
  double errbar = 0.0;
  std::int64_t terms = 0;
};

// One-step symbol (1/#D) sum_d exp(-2 pi i (d, xi)).
std::complex<double> g_value(const DigitSystem& system, std::span<const double> xi);

// Truncated infinite product prod_j g(xi / p^j) with error <= tol.
TransformValue fourier_transform(const DigitSystem& system, std::span<const double> xi, double tol);
TransformValue fourier_transform(const DigitSystem& system, const FrequencyPoint& xi, double tol);

// f(theta) = sum over i in {0..p-1}^n of |g((i + theta) / p)|.
double f_profile(const DigitSystem& system, std::span<const double> theta);

// Sum of |lambda^(xi + theta)| over xi in {0, ..., p^k - 1}^n. `term_tol`
// bounds the truncation error of each term; errbar sums them.
PartialSum partial_sum_l1(const DigitSystem& system, int k, std::span<const double> theta, double term_tol = 1e-10);
// Sum of |lambda^(xi)|^2 over the same range.
PartialSum partial_sum_l2(const DigitSystem& system, int k, double term_tol = 1e-10);

// Largest |d|_2 over the digit set.
double max_digit_norm(const DigitSystem& system);
// Largest |d - c|_2 with c the midpoint of the digit bounding box.
double centered_digit_radius(const DigitSystem& system);

// Summand cap for partial sums: p^{nk} <= this.
inline constexpr double kPartialSumCap = 1e8;

}  // namespace digitlens
