#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "popcorn/errors.hpp"
#include "popcorn/number_theory.hpp"

using namespace popcorn;

namespace {

std::uint64_t brute_totient(std::uint64_t n) {
    std::uint64_t c = 0;
    for (std::uint64_t m = 1; m < n; ++m) c += std::gcd(m, n) == 1;
    return c;
}

} // namespace

TEST_CASE("gcd examples") {
    CHECK(gcd(1, 35) == 1);
    CHECK(gcd(6, 4) == 2);
    CHECK(gcd(4, 6) == 2);
    CHECK(gcd(17, 17) == 17);
    CHECK_THROWS_AS(gcd(0, 3), DomainError);
}

TEST_CASE("totient examples") {
    CHECK(totient(2) == 1);
    CHECK(totient(12) == 4);
    CHECK(totient(97) == 96);
    CHECK_THROWS_AS(totient(1), DomainError);
    CHECK_THROWS_AS(totient(0), DomainError);
}

TEST_CASE("totient matches brute force counting and residue enumeration") {
    for (std::uint64_t n = 2; n <= 2000; ++n) REQUIRE(totient(n) == brute_totient(n));
    for (std::uint64_t n = 2; n <= 10000; ++n) REQUIRE(coprime_residues(n).size() == totient(n));
}

TEST_CASE("totient is multiplicative on coprime pairs") {
    std::mt19937_64 rng(3);
    int tested = 0;
    while (tested < 500) {
        const std::uint64_t m = 2 + rng() % 999;
        const std::uint64_t n = 2 + rng() % 999;
        if (std::gcd(m, n) != 1) continue;
        ++tested;
        CHECK(totient(m * n) == totient(m) * totient(n));
    }
}

TEST_CASE("coprime residues examples") {
    CHECK(coprime_residues(2) == std::vector<std::uint64_t>{1});
    CHECK(coprime_residues(4) == std::vector<std::uint64_t>{1, 3});
    CHECK(coprime_residues(9) == std::vector<std::uint64_t>{1, 2, 4, 5, 7, 8});
}

TEST_CASE("prime factors") {
    CHECK(prime_factors(360) == std::vector<std::uint64_t>{2, 3, 5});
    CHECK(prime_factors(97) == std::vector<std::uint64_t>{97});
}

TEST_CASE("sieve small tables") {
    const TotientTable two = totient_sieve(2);
    CHECK(two.limit() == 2);
    CHECK(two[2] == 1);
    const TotientTable ten = totient_sieve(10);
    for (std::uint64_t n = 2; n <= 10; ++n) CHECK(ten[n] == totient(n));
    CHECK_THROWS_AS(ten[11], DomainError);
    CHECK_THROWS_AS(totient_sieve(1), DomainError);
    CHECK_THROWS_AS(totient_sieve(1000, 100), ResourceError);
}

TEST_CASE("sieve to one million") {
    const std::uint64_t N = 1'000'000;
    const TotientTable table = totient_sieve(N);
    const auto v = table.values();
    double sum = 1; // phi(1)
    for (std::uint64_t n = 2; n <= N; ++n) {
        REQUIRE(v[n] < n);
        if (n >= 3) REQUIRE(v[n] % 2 == 0);
        sum += v[n];
    }
    CHECK(std::abs(sum / (double(N) * double(N)) - 3.0 / (M_PI * M_PI)) < 1e-3);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t n = 2 + rng() % (N - 1);
        REQUIRE(table[n] == totient(n));
    }

    const GrowthRatioFloor floor_at = scan_growth_ratio(table);
    CHECK(floor_at.minimum > 0.06);
    CHECK(floor_at.minimum == doctest::Approx(totient_growth_ratio(floor_at.argmin)));
}

TEST_CASE("growth ratio values") {
    CHECK(totient_growth_ratio(3) == doctest::Approx(2 * std::log(std::log(3.0)) / 3));
    CHECK(totient_growth_ratio(3) == doctest::Approx(0.0627).epsilon(1e-3));
    CHECK(totient_growth_ratio(510510) > 0.4);
    CHECK_THROWS_AS(totient_growth_ratio(2), DomainError);
}
