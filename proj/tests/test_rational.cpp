#include <doctest.h>

#include <random>

#include "popcorn/errors.hpp"
#include "popcorn/rational.hpp"

using namespace popcorn;

TEST_CASE("parse_rational accepts fractions, integers and decimals") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("7") == Rational(7));
    CHECK(parse_rational("0.3") == Rational(3, 10));
    CHECK(parse_rational("-2/4") == Rational(-1, 2));
    CHECK(parse_rational("1.25") == Rational(5, 4));
    CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
    CHECK_THROWS_AS(parse_rational("abc"), DomainError);
    CHECK_THROWS_AS(parse_rational(""), DomainError);
    CHECK_THROWS_AS(parse_rational("1/2/3"), DomainError);
}

TEST_CASE("to_string always prints p/q in lowest terms") {
    CHECK(to_string(Rational(1)) == "1/1");
    CHECK(to_string(Rational(6, 4)) == "3/2");
    CHECK(to_string(Rational(0)) == "0/1");
    CHECK(to_string(Rational(-2, 6)) == "-1/3");
}

TEST_CASE("dyadic decimals are exact") {
    CHECK(dyadic_decimal(1) == "0.5");
    CHECK(dyadic_decimal(3) == "0.125");
    CHECK(dyadic_decimal(10) == "0.0009765625");
    CHECK(dyadic_decimal(0) == "1");
}

TEST_CASE("floor and ceil of rationals") {
    CHECK(floor(Rational(7, 2)) == 3);
    CHECK(ceil(Rational(7, 2)) == 4);
    CHECK(floor(Rational(-7, 2)) == -4);
    CHECK(ceil(Rational(-7, 2)) == -3);
    CHECK(floor(Rational(4)) == 4);
    CHECK(ceil(Rational(4)) == 4);
}

TEST_CASE("floor_pow2 is floor(2^e) for rational e") {
    CHECK(floor_pow2(Rational(10)) == 1024);
    CHECK(floor_pow2(Rational(3, 2)) == 2); // 2.828...
    CHECK(floor_pow2(Rational(1, 2)) == 1);
    CHECK(floor_pow2(Rational(0)) == 1);
    CHECK_THROWS_AS(floor_pow2(Rational(-1)), DomainError);
    CHECK(floor_pow2(Rational(40, 3)) == 10321); // 2^{13.333} = 10321.27
    CHECK_THROWS_AS(floor_pow2(Rational(62)), ResourceError);
}

TEST_CASE("power_product_le agrees with a big integer oracle") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t x = 1 + rng() % 5000;
        const std::uint64_t y = 1 + rng() % 5000;
        const unsigned ex = 1 + rng() % 5;
        const unsigned ey = 1 + rng() % 5;
        const std::uint64_t e2 = rng() % 120;
        const bool expected = ipow(BigInt(x), ex) * ipow(BigInt(y), ey) <= (BigInt(1) << e2);
        CHECK(power_product_le(x, ex, y, ey, e2) == expected);
    }
}
