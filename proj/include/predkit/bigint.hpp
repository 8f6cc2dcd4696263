#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace predkit {

// Coefficients and constants are arbitrary precision throughout; quantifier
// elimination multiplies constraints together and must not overflow.
using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_gcd(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(a, b);
}

inline BigInt big_lcm(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::lcm(a, b);
}

// Floor division (C++ integer division truncates toward zero).
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) {
    --q;
  }
  return q;
}

// Mathematical modulus with result in [0, |b|).
inline BigInt floor_mod(const BigInt& a, const BigInt& b) {
  BigInt r = a % b;
  if (r < 0) {
    r += (b < 0 ? -b : b);
  }
  return r;
}

}  // namespace predkit
