#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace slalomlab {

using Rational = mpq_class;
using BigInt = mpz_class;

/// 1 / 2^n as an exact rational.
inline Rational inverse_power_of_two(unsigned n) {
  BigInt den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), n);
  return Rational(BigInt(1), den);
}

inline BigInt power_of_two(unsigned n) {
  BigInt out = 1;
  mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), n);
  return out;
}

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational q(BigInt(std::to_string(num)), BigInt(std::to_string(den)));
  q.canonicalize();
  return q;
}

/// "num/den" with the sign on the numerator; integers still carry "/1".
inline std::string to_fraction_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Parses "a/b", "a" or "-a/b".
Rational parse_rational(const std::string& text);

}  // namespace slalomlab
