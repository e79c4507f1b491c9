#include "digitlens/fourier.hpp"

#include "digitlens/kernels.hpp"

#include <cmath>
#include <numbers>

namespace digitlens {

std::vector<double> FrequencyPoint::value() const {
  if (lattice.size() != offset.size()) throw Error("FrequencyPoint: lattice and offset sizes differ");
  std::vector<double> x(lattice.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (offset[i] < 0.0 || offset[i] > 1.0) throw Error("FrequencyPoint: offset must lie in [0,1]");
    x[i] = static_cast<double>(lattice[i]) + offset[i];
  }
  return x;
}

namespace {

void check_arity(const DigitSystem& s, std::size_t n, const char* what) {
  if (static_cast<int>(n) != s.dim()) {
    throw Error(std::string(what) + ": vector has " + std::to_string(n) + " components, system dimension is " +
                std::to_string(s.dim()));
  }
  if (s.dim() > kMaxDim) throw Error(std::string(what) + ": dimensions above 4 are not supported");
}

}  // namespace

std::complex<double> g_value(const DigitSystem& system, std::span<const double> xi) {
  check_arity(system, xi.size(), "g_value");
  return kernels::g_eval(kernels::DigitTable(system), xi.data());
}

TransformValue fourier_transform(const DigitSystem& system, std::span<const double> xi, double tol) {
  check_arity(system, xi.size(), "fourier_transform");
  if (!(tol > 0.0)) throw Error("fourier_transform: tol must be positive");
  kernels::DigitTable t(system);
  double norm = 0.0;
  for (double v : xi) norm += v * v;
  norm = std::sqrt(norm);
  const double p = system.base();
  TransformValue out;
  out.value = 1.0;
  // |1 - g(eta)| <= 2 pi max_d |d| |eta|, summed over the dropped factors.
  double tail = 2.0 * std::numbers::pi * t.max_norm * norm * p / (p - 1.0);
  double scaled[kMaxDim];
  double div = 1.0;
  for (int j = 0;; ++j) {
    for (std::size_t a = 0; a < xi.size(); ++a) scaled[a] = xi[a] / div;
    out.value *= kernels::g_eval(t, scaled);
    ++out.terms;
    tail /= p;
    div *= p;
    if (tail <= tol) break;
  }
  out.error_bound = tail;
  return out;
}

TransformValue fourier_transform(const DigitSystem& system, const FrequencyPoint& xi, double tol) {
  const auto x = xi.value();
  return fourier_transform(system, x, tol);
}

double f_profile(const DigitSystem& system, std::span<const double> theta) {
  check_arity(system, theta.size(), "f_profile");
  return kernels::f_eval(kernels::DigitTable(system), theta.data());
}

namespace {

PartialSum partial(const DigitSystem& system, int k, std::span<const double> theta, double term_tol, int power) {
  if (k < 0) throw Error("partial sum: k must be >= 0");
  if (!(term_tol > 0.0)) throw Error("partial sum: term tolerance must be positive");
  const double summands = std::pow(static_cast<double>(system.base()), system.dim() * k);
  if (summands > kPartialSumCap) {
    throw Error("partial sum: p^(n k) = " + std::to_string(summands) + " summands exceeds the cap of 1e8; use a smaller k");
  }
  kernels::DigitTable t(system);
  auto s = kernels::omp::partial_sum(t, k, theta, term_tol, power);
  PartialSum out;
  out.k = k;
  out.theta.assign(theta.begin(), theta.end());
  out.value = s.value;
  out.errbar = s.errbar;
  out.terms = s.terms;
  return out;
}

}  // namespace

PartialSum partial_sum_l1(const DigitSystem& system, int k, std::span<const double> theta, double term_tol) {
  check_arity(system, theta.size(), "partial_sum_l1");
  return partial(system, k, theta, term_tol, 1);
}

PartialSum partial_sum_l2(const DigitSystem& system, int k, double term_tol) {
  std::vector<double> zero(static_cast<std::size_t>(system.dim()), 0.0);
  check_arity(system, zero.size(), "partial_sum_l2");
  return partial(system, k, zero, term_tol, 2);
}

double max_digit_norm(const DigitSystem& system) { return kernels::DigitTable(system).max_norm; }

double centered_digit_radius(const DigitSystem& system) {
  const int n = system.dim();
  std::vector<double> c(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    auto ax = system.axis_digits(a);
    c[static_cast<std::size_t>(a)] = 0.5 * (ax.front() + ax.back());
  }
  double r = 0.0;
  for (std::size_t i = 0; i < system.digit_count(); ++i) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) {
      const double d = system.digit(i)[static_cast<std::size_t>(a)] - c[static_cast<std::size_t>(a)];
      s += d * d;
    }
    r = std::max(r, std::sqrt(s));
  }
  return r;
}

}  // namespace digitlens
