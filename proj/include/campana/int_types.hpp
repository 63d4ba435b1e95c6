#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "campana/errors.hpp"

namespace campana {

using i128 = __int128;
using u128 = unsigned __int128;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("128-bit addition overflow");
  return r;
}

inline i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("128-bit multiplication overflow");
  return r;
}

inline std::int64_t checked_mul64(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("64-bit multiplication overflow");
  return r;
}

inline i128 checked_pow(i128 base, int exp) {
  i128 result = 1;
  for (int e = 0; e < exp; ++e) result = checked_mul(result, base);
  return result;
}

/// base^exp, or nullopt-like sentinel -1 when it exceeds `limit` (base >= 1).
inline std::int64_t pow_capped(std::int64_t base, int exp, std::int64_t limit) {
  i128 r = 1;
  for (int e = 0; e < exp; ++e) {
    r *= base;
    if (r > limit) return -1;
  }
  return static_cast<std::int64_t>(r);
}

inline std::int64_t narrow64(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw OverflowError("value exceeds 64-bit range");
  return static_cast<std::int64_t>(v);
}

std::string to_string(i128 v);
std::string to_string(u128 v);

inline BigInt to_big(i128 v) {
  bool neg = v < 0;
  u128 mag = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
  BigInt r = static_cast<std::uint64_t>(mag >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(mag);
  return neg ? BigInt(-r) : r;
}

inline std::string to_string(const Rational& r) {
  return r.str();
}

}  // namespace campana
