#pragma once

#include "digitlens/rational.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace digitlens {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using DigitTuple = std::vector<int>;

/// Base-p digit system in R^n: the set K_{p,D,l} and its uniform measure.
///
/// Digit tuples are deduplicated and kept in lexicographic order. The first
/// `free_prefix` levels of the expansion are unrestricted.
class DigitSystem {
 public:
  DigitSystem(int base, int dim, std::vector<DigitTuple> digits, int free_prefix = 0);

  // Convenience for n = 1.
  static DigitSystem one_dim(int base, std::vector<int> digits, int free_prefix = 0);
  // All of {0,...,p-1}^n.
  static DigitSystem full(int base, int dim);
  // Rectangle [a_1,b_1] x ... x [a_n,b_n] of digit tuples.
  static DigitSystem rectangle(int base, const std::vector<std::pair<int, int>>& ranges,
                               int free_prefix = 0);

  int base() const { return base_; }
  int dim() const { return dim_; }
  int free_prefix() const { return free_prefix_; }
  std::size_t digit_count() const { return digits_.size() / static_cast<std::size_t>(dim_); }
  std::span<const int> digit(std::size_t i) const {
    return {digits_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  // Row-major flat storage, digit_count() x dim().
  const std::vector<int>& flat_digits() const { return digits_; }
  std::vector<DigitTuple> digits() const;
  bool contains(std::span<const int> tuple) const;

  DigitSystem with_free_prefix(int l) const;

  // Projection of the digit set onto one axis, sorted and deduplicated.
  std::vector<int> axis_digits(int axis) const;
  // True when D = product of its axis projections.
  bool is_product() const;
  // True when D is a box of consecutive digits on every axis.
  bool is_rectangle() const;

  bool operator==(const DigitSystem&) const = default;

 private:
  int base_;
  int dim_;
  int free_prefix_;
  std::vector<int> digits_;
};

/// Cartesian product of one-dimensional systems, possibly with distinct bases.
class ProductSystem {
 public:
  explicit ProductSystem(std::vector<DigitSystem> factors);

  int dim() const { return static_cast<int>(factors_.size()); }
  const std::vector<DigitSystem>& factors() const { return factors_; }
  bool equal_bases() const;
  // Equivalent single system when all bases agree.
  DigitSystem flatten() const;

 private:
  std::vector<DigitSystem> factors_;
};

/// Rectangle digit system whose base is given in exponent form:
/// base = root^exponent, digits {0,...,root^digit_exponent - 1} on each of n axes.
/// Nothing here ever materializes the base.
struct ExponentFormSystem {
  int root = 10;
  long exponent = 1;
  long digit_exponent = 1;
  int dim = 1;
};

double hausdorff_dim(const DigitSystem& system);
double hausdorff_dim(const ProductSystem& system);
// Exact: n * digit_exponent / exponent.
Rational hausdorff_dim_exact(const ExponentFormSystem& system);

}  // namespace digitlens
