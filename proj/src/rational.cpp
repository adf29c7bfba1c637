#include "popcorn/rational.hpp"

#include <cctype>

#include "popcorn/errors.hpp"

namespace popcorn {

namespace {

using u128 = unsigned __int128;

bool checked_pow(std::uint64_t base, unsigned exponent, u128& out) {
    u128 acc = 1;
    for (unsigned i = 0; i < exponent; ++i) {
        if (base != 0 && acc > (~u128{0}) / base) return false;
        acc *= base;
    }
    out = acc;
    return true;
}

BigInt parse_digits(std::string_view digits) {
    if (digits.empty()) throw DomainError("empty number");
    BigInt value = 0;
    for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c))) throw DomainError("not a number: " + std::string(digits));
        value = value * 10 + (c - '0');
    }
    return value;
}

} // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    Rational value;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        BigInt den = parse_digits(text.substr(slash + 1));
        if (den == 0) throw DomainError("zero denominator in " + std::string(text));
        value = Rational(parse_digits(text.substr(0, slash)), den);
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if (whole.empty() && frac.empty()) throw DomainError("not a number: .");
        BigInt scale = ipow(BigInt(10), static_cast<unsigned>(frac.size()));
        BigInt num = (whole.empty() ? BigInt(0) : parse_digits(whole)) * scale + (frac.empty() ? BigInt(0) : parse_digits(frac));
        value = Rational(num, scale);
    } else {
        value = Rational(parse_digits(text));
    }
    return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value) {
    return boost::multiprecision::numerator(value).str() + "/" + boost::multiprecision::denominator(value).str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::string dyadic_decimal(int level) {
    if (level <= 0) return "1";
    // 2^-level = 5^level / 10^level
    std::string digits = ipow(BigInt(5), static_cast<unsigned>(level)).str();
    std::string padded(static_cast<std::size_t>(level) - digits.size(), '0');
    return "0." + padded + digits;
}

BigInt ipow(BigInt base, unsigned exponent) {
    BigInt result = 1;
    while (exponent != 0) {
        if (exponent & 1U) result *= base;
        exponent >>= 1U;
        if (exponent != 0) base *= base;
    }
    return result;
}

bool power_product_le(std::uint64_t x, unsigned ex, std::uint64_t y, unsigned ey, std::uint64_t two_exp) {
    if (two_exp < 127) {
        u128 px = 0;
        u128 py = 0;
        if (checked_pow(x, ex, px) && checked_pow(y, ey, py)) {
            const u128 bound = u128{1} << two_exp;
            if (px == 0 || py == 0) return true;
            if (px > bound) return false;
            // px * py <= bound  <=>  py <= bound / px (integer division is exact for this test)
            return py <= bound / px;
        }
    }
    BigInt lhs = ipow(BigInt(x), ex) * ipow(BigInt(y), ey);
    BigInt rhs = BigInt(1) << static_cast<unsigned>(two_exp);
    return lhs <= rhs;
}

std::uint64_t floor_pow2(const Rational& exponent) {
    if (exponent < 0) throw DomainError("floor_pow2 needs a non-negative exponent");
    const BigInt num = boost::multiprecision::numerator(exponent);
    const BigInt den = boost::multiprecision::denominator(exponent);
    if (den > 1'000'000 || num > 61 * den) throw ResourceError("2^" + to_string(exponent) + " is too large", "> 2^61");
    const auto p = num.convert_to<std::uint64_t>();
    const auto q = den.convert_to<unsigned>();
    // largest k >= 1 with k^q <= 2^p
    std::uint64_t lo = 1;
    std::uint64_t hi = std::uint64_t{1} << (p / q + 1);
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (power_product_le(mid, q, 1, 0, p)) lo = mid;
        else hi = mid;
    }
    return lo;
}

BigInt floor(const Rational& value) {
    const BigInt num = boost::multiprecision::numerator(value);
    const BigInt den = boost::multiprecision::denominator(value);
    BigInt q = num / den;
    if (num < 0 && q * den != num) q -= 1;
    return q;
}

BigInt ceil(const Rational& value) {
    BigInt f = floor(value);
    return Rational(f) == value ? f : BigInt(f + 1);
}

} // namespace popcorn
