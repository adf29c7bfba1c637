#pragma once

// Mesh-cell counting kernels. Points are grouped into rows sharing a height index;
// rows are independent, so the production kernel runs them in parallel with OpenMP.
// occupied_cells_reference is the plain per-point serial version kept as the oracle.

#include <cstdint>
#include <vector>

#include "popcorn/sets.hpp"

namespace popcorn {

/// Largest i with i^b q^a <= 2^{level b} (t = a/b), clamped to 2^level - 1:
/// the index of the half-open height cell containing q^-t.
std::uint64_t height_index(Exponent t, std::uint64_t q, int level);

/// floor(p 2^level / q), clamped to 2^level - 1.
std::uint64_t axis_index(std::uint64_t p, std::uint64_t q, int level);

/// Largest n >= 0 with n^a k^b <= 2^{level b}, i.e. floor((2^level / k)^{1/t}).
/// Throws ResourceError if the value does not fit in 62 bits.
std::uint64_t floor_root_ratio(Exponent t, std::uint64_t k, int level);

/// Smallest q >= 1 with q^a >= 2^{level b}, i.e. ceil(2^{level/t}).
std::uint64_t ceil_inverse_height(Exponent t, int level);

namespace kernels {

/// Sorted distinct axis indices hit by the admissible numerators of denominator q.
std::vector<std::uint64_t> axis_cells(std::uint64_t q, int level, Variant variant);

/// Number of distinct (spatial, height) mesh cells at `level` occupied by the points with
/// q_lo <= q <= q_hi whose height index is at least 1. Rows run in parallel.
std::uint64_t occupied_cells(const SetSpec& spec, int level, std::uint64_t q_lo, std::uint64_t q_hi);

/// Same count by streaming every point through its exact cell. Serial; for testing and benchmarks.
std::uint64_t occupied_cells_reference(const SetSpec& spec, int level, std::uint64_t q_lo, std::uint64_t q_hi);

} // namespace kernels
} // namespace popcorn
