#include "digitlens/kernels.hpp"
#include "tree_walk.hpp"

#include <cmath>
#include <numbers>

namespace digitlens::kernels {

DigitTable::DigitTable(const DigitSystem& system)
    : base(system.base()), dim(system.dim()), count(system.digit_count()), max_norm(0.0) {
  digits.reserve(system.flat_digits().size());
  for (int d : system.flat_digits()) digits.push_back(static_cast<double>(d));
  for (std::size_t i = 0; i < count; ++i) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double v = digits[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(a)];
      s += v * v;
    }
    max_norm = std::max(max_norm, std::sqrt(s));
  }
  centred = digits;
  radius = 0.0;
  for (int a = 0; a < dim; ++a) {
    const auto axis = static_cast<std::size_t>(a);
    double lo = digits[axis], hi = digits[axis];
    for (std::size_t i = 0; i < count; ++i) {
      lo = std::min(lo, digits[i * static_cast<std::size_t>(dim) + axis]);
      hi = std::max(hi, digits[i * static_cast<std::size_t>(dim) + axis]);
    }
    for (std::size_t i = 0; i < count; ++i) centred[i * static_cast<std::size_t>(dim) + axis] -= 0.5 * (lo + hi);
  }
  for (std::size_t i = 0; i < count; ++i) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double v = centred[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(a)];
      s += v * v;
    }
    radius = std::max(radius, std::sqrt(s));
  }
}

std::complex<double> g_eval(const DigitTable& t, const double* xi) {
  // g is 1-periodic in each coordinate; reduce first for accuracy.
  double red[kMaxDim];
  for (int a = 0; a < t.dim; ++a) red[a] = xi[a] - std::floor(xi[a]);
  double re = 0.0, im = 0.0;
  const double* d = t.digits.data();
  for (std::size_t i = 0; i < t.count; ++i, d += t.dim) {
    double phase = 0.0;
    for (int a = 0; a < t.dim; ++a) phase += d[a] * red[a];
    phase -= std::floor(phase);
    const double ang = -2.0 * std::numbers::pi * phase;
    re += std::cos(ang);
    im += std::sin(ang);
  }
  const double inv = 1.0 / static_cast<double>(t.count);
  return {re * inv, im * inv};
}

double abs_g(const DigitTable& t, const double* xi) { return std::abs(g_eval(t, xi)); }

double f_eval(const DigitTable& t, const double* theta) {
  std::array<int, kMaxDim> i{};
  double xi[kMaxDim];
  const double p = static_cast<double>(t.base);
  double sum = 0.0;
  while (true) {
    for (int a = 0; a < t.dim; ++a) xi[a] = (i[static_cast<std::size_t>(a)] + theta[a]) / p;
    sum += abs_g(t, xi);
    int a = 0;
    while (a < t.dim && ++i[static_cast<std::size_t>(a)] == t.base) i[static_cast<std::size_t>(a++)] = 0;
    if (a == t.dim) break;
  }
  return sum;
}

FBox f_box(const DigitTable& t, const double* centre, double half) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const int n = t.dim;
  const double p = static_cast<double>(t.base);
  const double inv = 1.0 / static_cast<double>(t.count);
  // Each term is |G(eta0 + x)| with |x_a| <= xw; G uses centred digits (same modulus).
  const double xw = half / p;
  const double remainder = 0.5 * two_pi * two_pi * t.radius * t.radius * n * xw * xw;
  std::array<int, kMaxDim> j{};
  double linear[kMaxDim] = {};
  double value = 0.0, quad = 0.0, first = 0.0;
  while (true) {
    double eta[kMaxDim];
    for (int a = 0; a < n; ++a) eta[a] = (j[static_cast<std::size_t>(a)] + centre[a]) / p;
    double re = 0.0, im = 0.0, dre[kMaxDim] = {}, dim_[kMaxDim] = {};
    const double* e = t.centred.data();
    for (std::size_t i = 0; i < t.count; ++i, e += n) {
      double phase = 0.0;
      for (int a = 0; a < n; ++a) phase += e[a] * eta[a];
      phase -= std::floor(phase);
      const double c = std::cos(two_pi * phase), s = -std::sin(two_pi * phase);
      re += c;
      im += s;
      // d/deta_a of exp(-2 pi i e.eta) = -2 pi i e_a exp(...)
      for (int a = 0; a < n; ++a) {
        dre[a] += two_pi * e[a] * s;
        dim_[a] -= two_pi * e[a] * c;
      }
    }
    re *= inv;
    im *= inv;
    const double mod = std::hypot(re, im);
    value += mod;
    double spread = 0.0;  // bound on |v . x|
    for (int a = 0; a < n; ++a) spread += std::hypot(dre[a], dim_[a]) * inv * xw;
    if (mod > 0.0 && mod >= spread) {
      // |a + v.x| <= |a| + Re(conj(a) v.x)/|a| + |v.x|^2 / (2|a|)
      for (int a = 0; a < n; ++a) linear[a] += (re * dre[a] + im * dim_[a]) * inv / mod;
      quad += spread * spread / (2.0 * mod);
    } else {
      first += spread;
    }
    quad += remainder;
    int a = 0;
    while (a < n && ++j[static_cast<std::size_t>(a)] == t.base) j[static_cast<std::size_t>(a++)] = 0;
    if (a == n) break;
  }
  double lin = 0.0;
  for (int a = 0; a < n; ++a) lin += std::abs(linear[a]) * xw;
  const double pn = std::pow(p, n);
  const double lipschitz = pn * two_pi * t.radius / p * half * std::sqrt(static_cast<double>(n));
  const double slack = 1e-12 * (1.0 + value);
  FBox out;
  out.value = value;
  out.upper = std::min({value + lin + quad + first, value + lipschitz, pn}) + slack;
  return out;
}

namespace detail {

// One summand |lambda^(x)|^power with its truncation error.
std::pair<double, double> transform_term(const DigitTable& t, const double* x, double tol, int power) {
  double norm = 0.0;
  for (int a = 0; a < t.dim; ++a) norm += x[a] * x[a];
  norm = std::sqrt(norm);
  const double p = static_cast<double>(t.base);
  // Tail after index J: 2 pi R |x| p^{-(J+1)} * p / (p - 1).
  double tail = 2.0 * std::numbers::pi * t.max_norm * norm * p / (p - 1.0);
  double prod = 1.0;
  double scaled[kMaxDim];
  double div = 1.0;
  for (int j = 0;; ++j) {
    for (int a = 0; a < t.dim; ++a) scaled[a] = x[a] / div;
    prod *= abs_g(t, scaled);
    tail /= p;
    div *= p;
    if (tail <= tol || prod == 0.0) break;
  }
  if (power == 2) return {prod * prod, (2.0 + tol) * tol};
  return {prod, tol};
}

}  // namespace detail

namespace serial {

std::vector<double> f_batch(const DigitTable& t, std::span<const double> thetas) {
  const auto n = static_cast<std::size_t>(t.dim);
  std::vector<double> out(thetas.size() / n);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f_eval(t, thetas.data() + i * n);
  return out;
}

std::vector<FBox> f_box_batch(const DigitTable& t, std::span<const double> centres, double half) {
  const auto n = static_cast<std::size_t>(t.dim);
  std::vector<FBox> out(centres.size() / n);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f_box(t, centres.data() + i * n, half);
  return out;
}

double grid_max(const DigitTable& t, int m, std::vector<double>& argmax) {
  std::int64_t total = 1;
  for (int a = 0; a < t.dim; ++a) total *= m;
  double best = -1.0;
  std::int64_t best_i = 0;
  double th[kMaxDim];
  for (std::int64_t i = 0; i < total; ++i) {
    std::int64_t r = i;
    for (int a = 0; a < t.dim; ++a) {
      th[a] = static_cast<double>(r % m) / m;
      r /= m;
    }
    const double v = f_eval(t, th);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  argmax.assign(static_cast<std::size_t>(t.dim), 0.0);
  for (int a = 0; a < t.dim; ++a) {
    argmax[static_cast<std::size_t>(a)] = static_cast<double>(best_i % m) / m;
    best_i /= m;
  }
  return best;
}

TermSum partial_sum(const DigitTable& t, int k, std::span<const double> theta, double term_tol, int power) {
  const std::int64_t side = checked_pow(t.base, k);
  std::int64_t total = 1;
  for (int a = 0; a < t.dim; ++a) total *= side;
  TermSum s;
  s.terms = total;
  double x[kMaxDim];
  for (std::int64_t i = 0; i < total; ++i) {
    std::int64_t r = i;
    for (int a = 0; a < t.dim; ++a) {
      x[a] = static_cast<double>(r % side) + theta[static_cast<std::size_t>(a)];
      r /= side;
    }
    auto [v, e] = detail::transform_term(t, x, term_tol, power);
    s.value += v;
    s.errbar += e;
  }
  return s;
}

CountTally count_tree(const CountQuery& q) {
  std::atomic<std::int64_t> nodes{0};
  detail::CountWalker w(q, nodes);
  CountTally t;
  w.walk(detail::Node{}, t);
  return t;
}

CoverTally cover(const CoverQuery& q) {
  std::atomic<std::int64_t> nodes{0};
  detail::CoverWalker w(q, nodes);
  detail::LocalCover c = w.empty_local();
  w.walk(detail::Node{}, c);
  return w.finish({&c});
}

}  // namespace serial
}  // namespace digitlens::kernels
