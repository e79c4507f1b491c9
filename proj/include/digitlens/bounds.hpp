#pragma once

#include "digitlens/digit_system.hpp"
#include "digitlens/sup_f.hpp"

#include <string>

namespace digitlens {

enum class BoundMethod { algorithm, crude, rectangle };

const char* to_string(BoundMethod m);
BoundMethod parse_bound_method(const std::string& s);

/// Certified lower bound for the Fourier l^1 dimension of lambda_{p,D}.
struct BoundReport {
  BoundMethod method = BoundMethod::algorithm;
  double lower_bound = 0.0;  // clamped at 0
  double raw_bound = 0.0;
  bool vacuous = false;      // raw_bound <= 0
  double sup_f_lo = 0.0;     // sup f enclosure; closed forms only give hi
  double sup_f_hi = 0.0;
  std::int64_t grid_cells_explored = 0;
  double tolerance = 0.0;
  bool converged = true;
};

BoundReport l1_lower_bound_algorithm(const DigitSystem& system, double tol, SupOptions options = {});
BoundReport l1_lower_bound_crude(const DigitSystem& system);
// Closed form in (p, n, t); p may be far beyond any enumerable base.
BoundReport l1_lower_bound_crude(double p, int n, double t);
BoundReport l1_lower_bound_rectangle(const DigitSystem& system);
BoundReport l1_lower_bound_rectangle(const ExponentFormSystem& system);

}  // namespace digitlens
