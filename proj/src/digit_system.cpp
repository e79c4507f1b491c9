#include "digitlens/digit_system.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace digitlens {

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw Error("rational_from_double: non-finite value");
  int exp = 0;
  double mant = std::frexp(x, &exp);
  // 53-bit mantissa as an integer.
  auto m = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(m);
  if (exp > 0) {
    r *= Rational(ipow(BigInt(2), static_cast<unsigned>(exp)));
  } else if (exp < 0) {
    r /= Rational(ipow(BigInt(2), static_cast<unsigned>(-exp)));
  }
  return r;
}

BigInt ipow(const BigInt& b, unsigned e) { return boost::multiprecision::pow(b, e); }

std::int64_t checked_pow(std::int64_t base, int exp) {
  constexpr std::int64_t kLimit = std::int64_t{1} << 62;
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > kLimit / base) return -1;
    r *= base;
  }
  return r;
}

DigitSystem::DigitSystem(int base, int dim, std::vector<DigitTuple> digits, int free_prefix)
    : base_(base), dim_(dim), free_prefix_(free_prefix) {
  if (base < 3) throw Error("DigitSystem: base must be >= 3, got " + std::to_string(base));
  if (dim < 1) throw Error("DigitSystem: dimension must be >= 1");
  if (free_prefix < 0) throw Error("DigitSystem: free prefix l must be >= 0");
  if (digits.empty()) throw Error("DigitSystem: digit set is empty");
  for (const auto& d : digits) {
    if (static_cast<int>(d.size()) != dim) {
      throw Error("DigitSystem: digit tuple has length " + std::to_string(d.size()) +
                  ", expected " + std::to_string(dim));
    }
    for (int v : d) {
      if (v < 0 || v >= base) {
        throw Error("DigitSystem: digit " + std::to_string(v) + " outside [0, " +
                    std::to_string(base - 1) + "]");
      }
    }
  }
  std::sort(digits.begin(), digits.end());
  digits.erase(std::unique(digits.begin(), digits.end()), digits.end());
  digits_.reserve(digits.size() * static_cast<std::size_t>(dim));
  for (const auto& d : digits) digits_.insert(digits_.end(), d.begin(), d.end());
}

DigitSystem DigitSystem::one_dim(int base, std::vector<int> digits, int free_prefix) {
  std::vector<DigitTuple> t;
  t.reserve(digits.size());
  for (int d : digits) t.push_back({d});
  return DigitSystem(base, 1, std::move(t), free_prefix);
}

DigitSystem DigitSystem::full(int base, int dim) {
  std::vector<std::pair<int, int>> r(static_cast<std::size_t>(dim), {0, base - 1});
  return rectangle(base, r);
}

DigitSystem DigitSystem::rectangle(int base, const std::vector<std::pair<int, int>>& ranges,
                                   int free_prefix) {
  if (ranges.empty()) throw Error("DigitSystem::rectangle: no axes");
  std::vector<DigitTuple> out{{}};
  for (auto [a, b] : ranges) {
    if (a > b) throw Error("DigitSystem::rectangle: empty range");
    std::vector<DigitTuple> next;
    for (const auto& prefix : out) {
      for (int v = a; v <= b; ++v) {
        auto t = prefix;
        t.push_back(v);
        next.push_back(std::move(t));
      }
    }
    out = std::move(next);
  }
  return DigitSystem(base, static_cast<int>(ranges.size()), std::move(out), free_prefix);
}

std::vector<DigitTuple> DigitSystem::digits() const {
  std::vector<DigitTuple> out;
  out.reserve(digit_count());
  for (std::size_t i = 0; i < digit_count(); ++i) {
    auto d = digit(i);
    out.emplace_back(d.begin(), d.end());
  }
  return out;
}

bool DigitSystem::contains(std::span<const int> tuple) const {
  if (static_cast<int>(tuple.size()) != dim_) return false;
  std::size_t lo = 0, hi = digit_count();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    auto d = digit(mid);
    if (std::lexicographical_compare(d.begin(), d.end(), tuple.begin(), tuple.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo == digit_count()) return false;
  auto d = digit(lo);
  return std::equal(d.begin(), d.end(), tuple.begin());
}

DigitSystem DigitSystem::with_free_prefix(int l) const {
  DigitSystem copy = *this;
  if (l < 0) throw Error("DigitSystem: free prefix l must be >= 0");
  copy.free_prefix_ = l;
  return copy;
}

std::vector<int> DigitSystem::axis_digits(int axis) const {
  std::set<int> s;
  for (std::size_t i = 0; i < digit_count(); ++i) s.insert(digit(i)[static_cast<std::size_t>(axis)]);
  return {s.begin(), s.end()};
}

bool DigitSystem::is_product() const {
  std::size_t prod = 1;
  for (int a = 0; a < dim_; ++a) prod *= axis_digits(a).size();
  return prod == digit_count();
}

bool DigitSystem::is_rectangle() const {
  if (!is_product()) return false;
  for (int a = 0; a < dim_; ++a) {
    auto ax = axis_digits(a);
    if (ax.back() - ax.front() + 1 != static_cast<int>(ax.size())) return false;
  }
  return true;
}

ProductSystem::ProductSystem(std::vector<DigitSystem> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw Error("ProductSystem: needs at least one factor");
  for (const auto& f : factors_) {
    if (f.dim() != 1) throw Error("ProductSystem: every factor must be one-dimensional");
  }
}

bool ProductSystem::equal_bases() const {
  return std::all_of(factors_.begin(), factors_.end(),
                     [&](const DigitSystem& f) { return f.base() == factors_.front().base(); });
}

DigitSystem ProductSystem::flatten() const {
  if (!equal_bases()) throw Error("ProductSystem::flatten: factors have different bases");
  int l = factors_.front().free_prefix();
  for (const auto& f : factors_) {
    if (f.free_prefix() != l) throw Error("ProductSystem::flatten: factors have different free prefixes");
  }
  std::vector<DigitTuple> out{{}};
  for (const auto& f : factors_) {
    std::vector<DigitTuple> next;
    for (const auto& prefix : out) {
      for (std::size_t i = 0; i < f.digit_count(); ++i) {
        auto t = prefix;
        t.push_back(f.digit(i)[0]);
        next.push_back(std::move(t));
      }
    }
    out = std::move(next);
  }
  return DigitSystem(factors_.front().base(), dim(), std::move(out), l);
}

double hausdorff_dim(const DigitSystem& system) {
  return std::log(static_cast<double>(system.digit_count())) /
         std::log(static_cast<double>(system.base()));
}

double hausdorff_dim(const ProductSystem& system) {
  double s = 0.0;
  for (const auto& f : system.factors()) s += hausdorff_dim(f);
  return s;
}

Rational hausdorff_dim_exact(const ExponentFormSystem& system) {
  if (system.root < 2 || system.exponent < 1 || system.digit_exponent < 0 ||
      system.digit_exponent > system.exponent || system.dim < 1) {
    throw Error("ExponentFormSystem: invalid parameters");
  }
  return Rational(system.dim * system.digit_exponent, system.exponent);
}

}  // namespace digitlens
