#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace popcorn {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "a/b", "n" or a plain decimal such as "0.3" into an exact rational.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" rendering; the denominator is always printed ("2/1").
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Exact decimal expansion of 2^-level, e.g. 3 -> "0.125".
std::string dyadic_decimal(int level);

BigInt ipow(BigInt base, unsigned exponent);

/// x^ex * y^ey <= 2^two_exp, decided exactly. A 128-bit fast path is tried first.
bool power_product_le(std::uint64_t x, unsigned ex, std::uint64_t y, unsigned ey, std::uint64_t two_exp);

/// floor(2^e) for a rational e >= 0, computed as the largest k with k^den <= 2^num.
/// Throws ResourceError when the result does not fit in 62 bits.
std::uint64_t floor_pow2(const Rational& exponent);

/// Integer floor and ceiling of a non-negative rational.
BigInt floor(const Rational& value);
BigInt ceil(const Rational& value);

} // namespace popcorn
