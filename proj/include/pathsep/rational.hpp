#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "pathsep/errors.hpp"

namespace pathsep {

// Exact rational arithmetic; swap in gmp_rational here if cpp_rational ever
// becomes the bottleneck.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "num/den" with the denominator omitted when it is 1.
inline std::string rational_to_string(const Rational& r) {
  std::string num = numerator(r).str();
  if (denominator(r) == 1) return num;
  return num + "/" + denominator(r).str();
}

inline Rational rational_from_string(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
    if (den == 0) throw Error("zero denominator");
    return Rational(num, den);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("invalid rational: " + s);
  }
}

// Smallest integer >= r.
inline BigInt rational_ceil(const Rational& r) {
  BigInt num = numerator(r), den = denominator(r);
  BigInt q = num / den;  // truncates toward zero
  if (q * den < num) ++q;
  return q;
}

}  // namespace pathsep
