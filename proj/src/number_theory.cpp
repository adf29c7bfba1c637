#include "popcorn/number_theory.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "popcorn/errors.hpp"

namespace popcorn {

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) throw DomainError("gcd is defined here for positive arguments only");
    return std::gcd(a, b);
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> factors;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            factors.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) factors.push_back(n);
    return factors;
}

std::uint64_t totient(std::uint64_t n) {
    if (n < 2) throw DomainError("totient requires n >= 2, got " + std::to_string(n));
    std::uint64_t result = n;
    for (std::uint64_t p : prime_factors(n)) result -= result / p;
    return result;
}

TotientTable::TotientTable(std::uint64_t limit) : limit_(limit), values_(limit + 1, 0) {
    std::vector<std::uint32_t> primes;
    std::vector<bool> composite(limit + 1, false);
    if (limit >= 1) values_[1] = 1;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (!composite[i]) {
            primes.push_back(static_cast<std::uint32_t>(i));
            values_[i] = static_cast<std::uint32_t>(i - 1);
        }
        for (std::uint32_t p : primes) {
            const std::uint64_t m = i * p;
            if (m > limit) break;
            composite[m] = true;
            if (i % p == 0) {
                values_[m] = values_[i] * p;
                break;
            }
            values_[m] = values_[i] * (p - 1);
        }
    }
    // phi(1) is outside the table's domain
    if (limit >= 1) values_[1] = 0;
}

std::uint32_t TotientTable::operator[](std::uint64_t n) const {
    if (n < 2 || n > limit_) throw DomainError("totient table index " + std::to_string(n) + " out of range");
    return values_[n];
}

TotientTable totient_sieve(std::uint64_t limit, std::uint64_t budget) {
    if (limit < 2) throw DomainError("totient_sieve requires N >= 2");
    if (limit > budget || limit >= (std::uint64_t{1} << 32)) {
        throw ResourceError("totient sieve over budget", std::to_string(limit) + " entries");
    }
    return TotientTable(limit);
}

double totient_growth_ratio(std::uint64_t n) {
    if (n < 3) throw DomainError("totient_growth_ratio requires n >= 3");
    const double nd = static_cast<double>(n);
    return static_cast<double>(totient(n)) * std::log(std::log(nd)) / nd;
}

GrowthRatioFloor scan_growth_ratio(const TotientTable& table) {
    if (table.limit() < 3) throw DomainError("growth ratio scan needs a table up to at least 3");
    GrowthRatioFloor best{3, INFINITY};
    const auto values = table.values();
    for (std::uint64_t n = 3; n <= table.limit(); ++n) {
        const double nd = static_cast<double>(n);
        const double ratio = values[n] * std::log(std::log(nd)) / nd;
        if (ratio < best.minimum) best = {n, ratio};
    }
    return best;
}

std::vector<std::uint64_t> coprime_residues(std::uint64_t q) {
    if (q < 2) throw DomainError("coprime_residues requires q >= 2");
    std::vector<char> struck(q, 0);
    for (std::uint64_t p : prime_factors(q)) {
        for (std::uint64_t m = p; m < q; m += p) struck[m] = 1;
    }
    std::vector<std::uint64_t> out;
    for (std::uint64_t m = 1; m < q; ++m) {
        if (!struck[m]) out.push_back(m);
    }
    return out;
}

} // namespace popcorn
