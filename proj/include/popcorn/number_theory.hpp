#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace popcorn {

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

/// Number of m in [1, n) coprime to n. Rejects n < 2.
std::uint64_t totient(std::uint64_t n);

/// Euler totient values for 2 <= n <= limit, built by a linear sieve.
/// Immutable after construction, so it may be shared between threads.
class TotientTable {
public:
    explicit TotientTable(std::uint64_t limit);

    std::uint64_t limit() const noexcept { return limit_; }
    std::uint32_t operator[](std::uint64_t n) const;
    std::span<const std::uint32_t> values() const noexcept { return values_; }

private:
    std::uint64_t limit_;
    std::vector<std::uint32_t> values_;
};

/// Largest limit accepted by totient_sieve (entries of four bytes each).
inline constexpr std::uint64_t kDefaultSieveBudget = std::uint64_t{1} << 30;

TotientTable totient_sieve(std::uint64_t limit, std::uint64_t budget = kDefaultSieveBudget);

/// phi(n) * log(log n) / n, natural logarithms. Rejects n < 3.
double totient_growth_ratio(std::uint64_t n);

struct GrowthRatioFloor {
    std::uint64_t argmin;
    double minimum;
};

/// Minimum of totient_growth_ratio over 3 <= n <= table.limit().
GrowthRatioFloor scan_growth_ratio(const TotientTable& table);

/// Ascending residues m in [1, q) with gcd(m, q) = 1.
std::vector<std::uint64_t> coprime_residues(std::uint64_t q);

/// Distinct prime factors of n, ascending.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

} // namespace popcorn
