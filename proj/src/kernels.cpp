#include "popcorn/kernels.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <string>

#include <omp.h>

#include "popcorn/errors.hpp"
#include "popcorn/number_theory.hpp"

namespace popcorn {

namespace {

using u128 = unsigned __int128;

void check_level(int level) {
    if (level < 0 || level > 62) throw DomainError("mesh level " + std::to_string(level) + " out of range [0, 62]");
}

struct Row {
    std::uint64_t height;
    std::uint64_t q_first; // largest q of the row
    std::uint64_t q_last;  // smallest q of the row
};

// Rows of equal height index, q descending, height index >= 1.
std::vector<Row> build_rows(Exponent t, int level, std::uint64_t q_lo, std::uint64_t q_hi) {
    std::vector<Row> rows;
    std::uint64_t prev = 0;
    const std::uint64_t top = (std::uint64_t{1} << level) - 1;
    for (std::uint64_t q = q_hi; q >= q_lo; --q) {
        // height index is non-increasing in q, so bisect above the previous value
        std::uint64_t lo = prev;
        std::uint64_t hi = top + 1;
        while (hi - lo > 1) {
            const std::uint64_t mid = lo + (hi - lo) / 2;
            if (power_product_le(mid, t.den, q, t.num, static_cast<std::uint64_t>(level) * t.den)) lo = mid;
            else hi = mid;
        }
        prev = lo;
        if (lo >= 1) {
            if (!rows.empty() && rows.back().height == lo) rows.back().q_last = q;
            else rows.push_back({lo, q, q});
        }
        if (q == q_lo) break;
    }
    return rows;
}

std::uint64_t ipow_u64(std::uint64_t base, int exponent) {
    std::uint64_t r = 1;
    for (int i = 0; i < exponent; ++i) r *= base;
    return r;
}

// Calls f(linear index) for every tuple of S^{dims}.
template <typename F>
void for_each_product(const std::vector<std::uint64_t>& axis, int dims, std::uint64_t stride, F&& f) {
    if (axis.empty()) return;
    std::vector<std::size_t> odo(static_cast<std::size_t>(dims), 0);
    while (true) {
        std::uint64_t linear = 0;
        for (int i = 0; i < dims; ++i) linear = linear * stride + axis[odo[static_cast<std::size_t>(i)]];
        f(linear);
        int a = dims - 1;
        while (a >= 0) {
            if (++odo[static_cast<std::size_t>(a)] < axis.size()) break;
            odo[static_cast<std::size_t>(a)] = 0;
            --a;
        }
        if (a < 0) return;
    }
}

// Distinct spatial cells of one row. Every point of a denominator q occupies the product set
// S_q^{d-1}, so the row count is |union_q S_q^{d-1}|.
std::uint64_t count_row(const SetSpec& spec, int level, const Row& row, std::vector<std::uint64_t>& bits) {
    const int dims = spec.d - 1;
    const std::uint64_t per_axis = std::uint64_t{1} << level;
    const std::uint64_t spatial = ipow_u64(per_axis, dims);

    if (row.q_first == row.q_last) {
        const auto axis = kernels::axis_cells(row.q_first, level, spec.variant);
        return ipow_u64(axis.size(), dims);
    }

    if (spatial <= (std::uint64_t{1} << 28)) {
        bits.assign((spatial + 63) / 64, 0);
        std::uint64_t count = 0;
        for (std::uint64_t q = row.q_first;; --q) {
            const auto axis = kernels::axis_cells(q, level, spec.variant);
            if (axis.size() == per_axis) return spatial;
            for_each_product(axis, dims, per_axis, [&](std::uint64_t linear) {
                std::uint64_t& word = bits[linear >> 6];
                const std::uint64_t bit = std::uint64_t{1} << (linear & 63);
                count += (word & bit) == 0;
                word |= bit;
            });
            if (count == spatial || q == row.q_last) return count;
        }
    }
    std::vector<std::uint64_t> cells;
    for (std::uint64_t q = row.q_first;; --q) {
        const auto axis = kernels::axis_cells(q, level, spec.variant);
        if (axis.size() == per_axis) return spatial;
        for_each_product(axis, dims, per_axis, [&](std::uint64_t linear) { cells.push_back(linear); });
        if (q == row.q_last) break;
    }
    std::sort(cells.begin(), cells.end());
    return static_cast<std::uint64_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

} // namespace

std::uint64_t height_index(Exponent t, std::uint64_t q, int level) {
    check_level(level);
    const std::uint64_t top = (std::uint64_t{1} << level) - 1;
    std::uint64_t lo = 0;
    std::uint64_t hi = top + 1;
    const std::uint64_t two_exp = static_cast<std::uint64_t>(level) * t.den;
    if (power_product_le(hi, t.den, q, t.num, two_exp)) return top;
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (power_product_le(mid, t.den, q, t.num, two_exp)) lo = mid;
        else hi = mid;
    }
    return lo;
}

std::uint64_t axis_index(std::uint64_t p, std::uint64_t q, int level) {
    check_level(level);
    const std::uint64_t top = (std::uint64_t{1} << level) - 1;
    const u128 idx = (static_cast<u128>(p) << level) / q;
    return idx > top ? top : static_cast<std::uint64_t>(idx);
}

std::uint64_t floor_root_ratio(Exponent t, std::uint64_t k, int level) {
    check_level(level);
    const std::uint64_t two_exp = static_cast<std::uint64_t>(level) * t.den;
    // n <= 2^{level b / a}
    const std::uint64_t bound_bits = two_exp / t.num + 1;
    std::uint64_t hi = 0;
    if (bound_bits >= 62) {
        hi = std::uint64_t{1} << 62;
        if (power_product_le(hi, t.num, k, t.den, two_exp)) {
            throw ResourceError("layer bound does not fit in 62 bits", "> 2^62");
        }
    } else {
        hi = std::uint64_t{1} << bound_bits;
    }
    std::uint64_t lo = 0;
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (power_product_le(mid, t.num, k, t.den, two_exp)) lo = mid;
        else hi = mid;
    }
    return lo;
}

std::uint64_t ceil_inverse_height(Exponent t, int level) {
    const std::uint64_t n = floor_root_ratio(t, 1, level);
    const BigInt target = BigInt(1) << static_cast<unsigned>(static_cast<std::uint64_t>(level) * t.den);
    return ipow(BigInt(n), t.num) == target ? n : n + 1;
}

namespace kernels {

std::vector<std::uint64_t> axis_cells(std::uint64_t q, int level, Variant variant) {
    check_level(level);
    const std::uint64_t per_axis = std::uint64_t{1} << level;
    std::vector<std::uint64_t> out;
    if (q < 2) return out;
    if (q <= per_axis) {
        // distinct numerators land in distinct cells
        if (variant == Variant::full) {
            out.reserve(q - 1);
            for (std::uint64_t p = 1; p < q; ++p) out.push_back(axis_index(p, q, level));
        } else {
            for (std::uint64_t p : coprime_residues(q)) out.push_back(axis_index(p, q, level));
        }
        return out;
    }
    // q > 2^level: cell i holds numerators in [ceil(i q / 2^L), ceil((i+1) q / 2^L))
    out.reserve(per_axis);
    auto ceil_div = [&](u128 num) { return static_cast<std::uint64_t>((num + (u128{1} << level) - 1) >> level); };
    for (std::uint64_t i = 0; i < per_axis; ++i) {
        std::uint64_t lo = std::max<std::uint64_t>(1, ceil_div(static_cast<u128>(i) * q));
        const std::uint64_t hi = std::min<std::uint64_t>(q - 1, ceil_div(static_cast<u128>(i + 1) * q) - 1);
        if (variant == Variant::full) {
            if (lo <= hi) out.push_back(i);
            continue;
        }
        for (std::uint64_t p = lo; p <= hi; ++p) {
            if (std::gcd(p, q) == 1) {
                out.push_back(i);
                break;
            }
        }
    }
    return out;
}

std::uint64_t occupied_cells(const SetSpec& spec, int level, std::uint64_t q_lo, std::uint64_t q_hi) {
    check_level(level);
    if (static_cast<std::uint64_t>(level) * static_cast<std::uint64_t>(spec.d - 1) > 62) {
        throw ResourceError("spatial mesh too fine", "2^" + std::to_string(level * (spec.d - 1)) + " cells");
    }
    q_lo = std::max<std::uint64_t>(q_lo, 2);
    if (q_hi < q_lo) return 0;
    const std::vector<Row> rows = build_rows(spec.t, level, q_lo, q_hi);
    const auto n_rows = static_cast<std::int64_t>(rows.size());
    std::uint64_t total = 0;
#pragma omp parallel reduction(+ : total)
    {
        std::vector<std::uint64_t> bits;
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t r = 0; r < n_rows; ++r) {
            total += count_row(spec, level, rows[static_cast<std::size_t>(r)], bits);
        }
    }
    return total;
}

std::uint64_t occupied_cells_reference(const SetSpec& spec, int level, std::uint64_t q_lo, std::uint64_t q_hi) {
    check_level(level);
    std::vector<std::vector<std::uint64_t>> cells;
    PointEnumerator points(spec, q_lo, q_hi);
    RationalPoint p;
    std::uint64_t cached_q = 0;
    std::uint64_t cached_h = 0;
    while (points.next(p)) {
        if (p.denominator != cached_q) {
            cached_q = p.denominator;
            cached_h = height_index(spec.t, cached_q, level);
        }
        if (cached_h == 0) continue;
        std::vector<std::uint64_t> cell;
        cell.reserve(static_cast<std::size_t>(spec.d));
        for (auto m : p.numerators) cell.push_back(axis_index(m, p.denominator, level));
        cell.push_back(cached_h);
        cells.push_back(std::move(cell));
    }
    std::sort(cells.begin(), cells.end());
    return static_cast<std::uint64_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

} // namespace kernels
} // namespace popcorn
