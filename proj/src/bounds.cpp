#include "digitlens/bounds.hpp"

#include <cmath>

namespace digitlens {

const char* to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::algorithm: return "algorithm";
    case BoundMethod::crude: return "crude";
    case BoundMethod::rectangle: return "rectangle";
  }
  return "?";
}

BoundMethod parse_bound_method(const std::string& s) {
  if (s == "algorithm") return BoundMethod::algorithm;
  if (s == "crude") return BoundMethod::crude;
  if (s == "rectangle") return BoundMethod::rectangle;
  throw Error("unknown bound method '" + s + "' (expected algorithm, crude or rectangle)");
}

namespace {

void clamp(BoundReport& r) {
  r.vacuous = r.raw_bound <= 0.0;
  r.lower_bound = r.vacuous ? 0.0 : r.raw_bound;
}

}  // namespace

BoundReport l1_lower_bound_algorithm(const DigitSystem& system, double tol, SupOptions options) {
  if (!(tol > 0.0)) throw Error("l1_lower_bound_algorithm: tol must be positive");
  options.tol = tol;
  const SupEnclosure e = sup_f(system, options);
  BoundReport r;
  r.method = BoundMethod::algorithm;
  r.sup_f_lo = e.lo;
  r.sup_f_hi = e.hi;
  r.grid_cells_explored = e.cells_explored;
  r.tolerance = tol;
  r.converged = e.converged;
  r.raw_bound = system.dim() - std::log(e.hi) / std::log(static_cast<double>(system.base()));
  clamp(r);
  return r;
}

BoundReport l1_lower_bound_crude(double p, int n, double t) {
  if (p < 4.0) throw Error("crude bound: requires p >= 4 (the H(theta) <= 2 p log p estimate needs it)");
  const double pn = std::pow(p, n);
  if (t < 1.0) throw Error("crude bound: requires t = p^n - #D >= 1");
  if (t >= pn) throw Error("crude bound: digit set would be empty");
  BoundReport r;
  r.method = BoundMethod::crude;
  r.sup_f_hi = (t * pn + std::pow(2.0 * p * std::log(p), n)) / (pn - t);
  r.raw_bound = n - std::log(r.sup_f_hi) / std::log(p);
  clamp(r);
  return r;
}

BoundReport l1_lower_bound_crude(const DigitSystem& system) {
  const double pn = std::pow(static_cast<double>(system.base()), system.dim());
  return l1_lower_bound_crude(system.base(), system.dim(), pn - static_cast<double>(system.digit_count()));
}

BoundReport l1_lower_bound_rectangle(const DigitSystem& system) {
  if (!system.is_rectangle()) {
    throw Error("rectangle bound: digit set is not a rectangle [a1,b1] x ... x [an,bn] of consecutive digits");
  }
  const double p = system.base();
  if (p < 4.0) throw Error("rectangle bound: requires p >= 4");
  const int n = system.dim();
  BoundReport r;
  r.method = BoundMethod::rectangle;
  r.sup_f_hi = std::pow(2.0 * p * std::log(p), n) / static_cast<double>(system.digit_count());
  r.raw_bound = hausdorff_dim(system) - n * std::log(std::log(p * p)) / std::log(p);
  clamp(r);
  return r;
}

BoundReport l1_lower_bound_rectangle(const ExponentFormSystem& system) {
  const Rational dim = hausdorff_dim_exact(system);
  // log p = exponent * ln(root); log log p^2 = ln(2 * exponent * ln(root)).
  const long double log_p = static_cast<long double>(system.exponent) * std::log(static_cast<long double>(system.root));
  if (log_p < std::log(4.0L)) throw Error("rectangle bound: requires p >= 4");
  const long double loglog = std::log(2.0L * log_p);
  BoundReport r;
  r.method = BoundMethod::rectangle;
  r.raw_bound = static_cast<double>(static_cast<long double>(to_double(dim)) - system.dim * loglog / log_p);
  // (2 p log p)^n / #D overflows for such bases; record its natural log instead.
  r.sup_f_hi = std::numeric_limits<double>::infinity();
  clamp(r);
  return r;
}

}  // namespace digitlens
