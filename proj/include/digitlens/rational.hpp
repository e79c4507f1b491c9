#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace digitlens {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact value of a finite double.
Rational rational_from_double(double x);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) { return r.str(); }

// b^e for nonnegative e, exact.
BigInt ipow(const BigInt& b, unsigned e);

// Overflow-checked integer power; returns -1 when the result exceeds 2^62.
std::int64_t checked_pow(std::int64_t base, int exp);

}  // namespace digitlens
