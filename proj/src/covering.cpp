#include "popcorn/covering.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_set>

#include "popcorn/errors.hpp"
#include "popcorn/number_theory.hpp"

namespace popcorn {

namespace {

using u128 = unsigned __int128;

std::uint64_t spatial_cells(const SetSpec& spec, DyadicScale scale) {
    const auto bits = static_cast<std::uint64_t>(scale.level()) * static_cast<std::uint64_t>(spec.d - 1);
    if (bits > 62) throw ResourceError("spatial mesh too fine", "2^" + std::to_string(bits) + " cells");
    return std::uint64_t{1} << bits;
}

// Corner coordinate u/v with v < 2^31.
struct SmallFraction {
    std::uint64_t num;
    std::uint64_t den;
};

SmallFraction small_fraction(const Rational& x) {
    const BigInt num = boost::multiprecision::numerator(x);
    const BigInt den = boost::multiprecision::denominator(x);
    if (den >= (BigInt(1) << 31)) throw DomainError("corner coordinate " + to_string(x) + " has too large a denominator");
    return {num.convert_to<std::uint64_t>(), den.convert_to<std::uint64_t>()};
}

// q^-t >= y, decided exactly for rational y >= 0.
bool height_at_least(Exponent t, std::uint64_t q, const Rational& y) {
    if (y <= 0) return true;
    const BigInt num = boost::multiprecision::numerator(y);
    const BigInt den = boost::multiprecision::denominator(y);
    return ipow(BigInt(q), t.num) * ipow(num, t.den) <= ipow(den, t.den);
}

// q^-t > y, decided exactly.
bool height_above(Exponent t, std::uint64_t q, const Rational& y) {
    if (y < 0) return true;
    const BigInt num = boost::multiprecision::numerator(y);
    const BigInt den = boost::multiprecision::denominator(y);
    return ipow(BigInt(q), t.num) * ipow(num, t.den) < ipow(den, t.den);
}

// Largest q >= 1 with q^-t >= y (y > 0).
std::uint64_t last_q_with_height_at_least(Exponent t, const Rational& y) {
    if (!height_at_least(t, 1, y)) return 0;
    std::uint64_t lo = 1;
    std::uint64_t hi = 2;
    while (height_at_least(t, hi, y)) {
        lo = hi;
        if (hi > (std::uint64_t{1} << 40)) throw ResourceError("localized count window too deep", "q > 2^40");
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (height_at_least(t, mid, y)) lo = mid;
        else hi = mid;
    }
    return lo;
}

} // namespace

DyadicScale::DyadicScale(int level) : level_(level) {
    if (level < 1 || level > 62) throw DomainError("dyadic level must lie in [1, 62], got " + std::to_string(level));
}

Rational DyadicScale::delta() const { return Rational(BigInt(1), BigInt(1) << level_); }

CellIndex cell_of(const SetSpec& spec, const RationalPoint& point, DyadicScale scale) {
    if (point.numerators.size() != static_cast<std::size_t>(spec.d - 1) || point.denominator < 1) {
        throw DomainError("point does not match the set dimension");
    }
    CellIndex cell;
    cell.index.reserve(static_cast<std::size_t>(spec.d));
    for (auto p : point.numerators) {
        if (p > point.denominator) throw DomainError("coordinate above 1");
        cell.index.push_back(axis_index(p, point.denominator, scale.level()));
    }
    cell.index.push_back(height_index(spec.t, point.denominator, scale.level()));
    return cell;
}

std::uint64_t cover_q_max(const SetSpec& spec, DyadicScale scale) {
    return std::max<std::uint64_t>(2, ceil_inverse_height(spec.t, scale.level()));
}

CoverReport cover_count(const SetSpec& spec, DyadicScale scale, std::uint64_t max_points) {
    const std::uint64_t base = spatial_cells(spec, scale);
    const std::uint64_t q_max = cover_q_max(spec, scale);
    check_point_budget(spec, 2, q_max, max_points);
    const std::uint64_t popcorn = kernels::occupied_cells(spec, scale.level(), 2, q_max);
    return CoverReport{scale, base + popcorn, base, popcorn};
}

CoverReport cover_count_reference(const SetSpec& spec, DyadicScale scale, std::uint64_t max_points) {
    const std::uint64_t base = spatial_cells(spec, scale);
    const std::uint64_t q_max = cover_q_max(spec, scale);
    check_point_budget(spec, 2, q_max, max_points);
    const std::uint64_t popcorn = kernels::occupied_cells_reference(spec, scale.level(), 2, q_max);
    return CoverReport{scale, base + popcorn, base, popcorn};
}

void write_cover_csv_header(std::ostream& os) { os << "j,delta,total,base_cells,popcorn_cells\n"; }

void write_cover_csv_row(std::ostream& os, const CoverReport& r) {
    os << r.scale.level() << ',' << dyadic_decimal(r.scale.level()) << ',' << r.total << ',' << r.base_cells << ','
       << r.popcorn_cells << '\n';
}

std::uint64_t layer_bound_index(const SetSpec& spec, DyadicScale scale, std::uint64_t k) {
    if (k < 1 || k > scale.cells_per_axis() + 1) {
        throw DomainError("layer index k = " + std::to_string(k) + " outside [1, 2^j + 1]");
    }
    return floor_root_ratio(spec.t, k, scale.level());
}

PointEnumerator layer_points(const SetSpec& spec, DyadicScale scale, std::uint64_t k) {
    if (spec.variant != Variant::graph) throw DomainError("layers are defined for the graph variant");
    const std::uint64_t high = layer_bound_index(spec, scale, k);
    // k = 2^j + 1 is the largest admissible index; its successor bound is below 1
    const std::uint64_t low = k == scale.cells_per_axis() + 1 ? 0 : layer_bound_index(spec, scale, k + 1);
    if (high <= low) return PointEnumerator(spec, 2, 1);
    return PointEnumerator(spec, low + 1, high);
}

std::uint64_t layer_cover_count(const SetSpec& spec, DyadicScale scale, std::uint64_t k) {
    if (spec.variant != Variant::graph) throw DomainError("layers are defined for the graph variant");
    const std::uint64_t high = layer_bound_index(spec, scale, k);
    const std::uint64_t low = k == scale.cells_per_axis() + 1 ? 0 : layer_bound_index(spec, scale, k + 1);
    const std::uint64_t n_first = std::max<std::uint64_t>(low + 1, 2);
    if (high < n_first) return 0;

    const int dims = spec.d - 1;
    const int level = scale.level();
    const std::uint64_t per_axis = scale.cells_per_axis();
    const std::uint64_t spatial = spatial_cells(spec, scale);
    const bool dense = static_cast<std::uint64_t>(level) * static_cast<std::uint64_t>(dims) <= 32;
    std::vector<bool> seen_dense(dense ? spatial : 0, false);
    std::unordered_set<std::uint64_t> seen_sparse;
    std::uint64_t count = 0;

    for (std::uint64_t n = high; n >= n_first; --n) {
        std::vector<std::uint64_t> axis;
        for (std::uint64_t m : coprime_residues(n)) {
            const std::uint64_t idx = axis_index(m, n, level);
            if (axis.empty() || axis.back() != idx) axis.push_back(idx);
        }
        if (axis.size() == per_axis) return spatial;
        std::vector<std::size_t> odo(static_cast<std::size_t>(dims), 0);
        bool done = false;
        while (!done) {
            std::uint64_t linear = 0;
            for (auto o : odo) linear = linear * per_axis + axis[o];
            if (dense) {
                if (!seen_dense[linear]) {
                    seen_dense[linear] = true;
                    ++count;
                }
            } else if (seen_sparse.insert(linear).second) {
                ++count;
            }
            std::size_t a = odo.size();
            done = true;
            while (a > 0) {
                --a;
                if (++odo[a] < axis.size()) {
                    done = false;
                    break;
                }
                odo[a] = 0;
            }
        }
        if (count == spatial) return count;
        if (n == n_first) break;
    }
    return count;
}

Rational epsilon_cap(const SetSpec& spec) {
    const Rational t = spec.t.value();
    const Rational d = spec.d;
    const Rational a = d * t / (t + d) - t / (t + 1);
    const Rational b = 1 - d * t / (d + t);
    return Rational(1, 16) * (a < b ? a : b);
}

KRange admissible_k_range(const SetSpec& spec, DyadicScale scale, const Rational& epsilon) {
    if (!spec.subcritical()) throw DomainError("admissible k range requires t < d/(d-1)");
    const Rational cap = epsilon_cap(spec);
    if (epsilon <= 0 || epsilon >= cap) {
        throw DomainError("epsilon " + to_string(epsilon) + " must lie in (0, " + to_string(cap) +
                          "), the cap (1/16) min{dt/(t+d) - t/(t+1), 1 - dt/(d+t)}");
    }
    const Rational t = spec.t.value();
    const Rational d = spec.d;
    const Rational j = scale.level();
    // delta^{-x} = 2^{j x}
    const std::uint64_t k_min = floor_pow2(j * (1 + epsilon - d * t / (t + d)));
    const std::uint64_t k_max = floor_pow2(j * (1 - epsilon - t / (t + 1)));
    if (k_min > k_max) {
        throw VerificationError("empty k range [" + std::to_string(k_min) + ", " + std::to_string(k_max) + "] at j = " +
                                std::to_string(scale.level()) + "; delta is not small enough");
    }
    if (k_max > scale.cells_per_axis()) throw VerificationError("k range exceeds 2^j");
    for (std::uint64_t k = k_min; k <= k_max; ++k) {
        const std::uint64_t high = layer_bound_index(spec, scale, k);
        const std::uint64_t low = layer_bound_index(spec, scale, k + 1);
        if (high <= low) {
            throw VerificationError("k = " + std::to_string(k) + " at j = " + std::to_string(scale.level()) +
                                    ": no n with k delta <= n^-t < (k+1) delta");
        }
        if (high >= scale.cells_per_axis()) {
            throw VerificationError("k = " + std::to_string(k) + " at j = " + std::to_string(scale.level()) +
                                    ": n = " + std::to_string(high) + " has 1/n <= delta");
        }
    }
    return KRange{epsilon, k_min, k_max};
}

std::optional<int> smallest_admissible_level(const SetSpec& spec, const Rational& epsilon, int j_max) {
    std::optional<int> best;
    for (int j = j_max; j >= 1; --j) {
        try {
            admissible_k_range(spec, DyadicScale(j), epsilon);
            best = j;
        } catch (const VerificationError&) {
            break;
        }
    }
    return best;
}

LocalizedCount localized_cover_count(const SetSpec& spec, std::span<const Rational> corner, int R_level, int r_level,
                                     std::uint64_t max_points) {
    if (corner.size() != static_cast<std::size_t>(spec.d)) throw DomainError("corner must have d coordinates");
    for (const auto& x : corner) {
        if (x < 0 || x > 1) throw DomainError("corner coordinate " + to_string(x) + " outside [0,1]");
    }
    if (R_level < 0 || r_level < R_level || r_level > 40 || r_level - R_level > 20) {
        throw DomainError("need 0 <= R_level <= r_level <= 40 with r_level - R_level <= 20");
    }
    const int dims = spec.d - 1;
    const int shift = r_level - R_level;
    const std::uint64_t n = std::uint64_t{1} << shift; // cells per axis inside the cube
    const Rational R(BigInt(1), BigInt(1) << R_level);
    const Rational r(BigInt(1), BigInt(1) << r_level);

    LocalizedCount out;

    // Bottom row when the cube touches the base plane: every spatial cell meeting [0,1]^{d-1}.
    const bool on_base = corner.back() == 0;
    if (on_base) {
        std::uint64_t cells = 1;
        for (int i = 0; i < dims; ++i) {
            const Rational room = (1 - corner[static_cast<std::size_t>(i)]) / r;
            const std::uint64_t axis = std::min<std::uint64_t>(n, floor(room).convert_to<std::uint64_t>() + 1);
            cells *= axis;
        }
        out.mesh_cells = cells;
    }

    // Points with height in [low, x_d + R]; on the base row only heights >= r remain.
    const Rational low = on_base ? r : corner.back();
    const Rational high = corner.back() + R;
    const std::uint64_t q_hi = last_q_with_height_at_least(spec.t, low);
    // smallest q >= 2 with q^-t <= x_d + R; heights decrease in q
    std::uint64_t q_lo = 2;
    if (q_hi >= 2 && height_above(spec.t, 2, high)) {
        std::uint64_t a = 2;
        std::uint64_t b = q_hi + 1;
        while (b - a > 1) {
            const std::uint64_t mid = a + (b - a) / 2;
            if (height_above(spec.t, mid, high)) a = mid;
            else b = mid;
        }
        q_lo = b;
    }
    if (q_hi < 2 || q_lo > q_hi) {
        out.total = out.mesh_cells;
        return out;
    }
    if (q_hi >= (std::uint64_t{1} << 32)) throw ResourceError("localized count window too deep", "q > 2^32");

    std::vector<SmallFraction> x;
    for (const auto& c : corner) x.push_back(small_fraction(c));
    const SmallFraction xd = x.back();

    // window of numerators on each axis for denominator q
    auto window = [&](std::uint64_t q, int axis) {
        const SmallFraction c = x[static_cast<std::size_t>(axis)];
        const u128 lo_num = static_cast<u128>(c.num) * q;
        std::uint64_t lo = static_cast<std::uint64_t>((lo_num + c.den - 1) / c.den);
        const u128 hi_num = (static_cast<u128>(c.num) * (u128{1} << R_level) + c.den) * q;
        const u128 hi_den = static_cast<u128>(c.den) << R_level;
        std::uint64_t hi = static_cast<std::uint64_t>(hi_num / hi_den);
        lo = std::max<std::uint64_t>(lo, 1);
        hi = std::min<std::uint64_t>(hi, q - 1);
        return std::pair{lo, hi};
    };

    u128 predicted = 0;
    for (std::uint64_t q = q_lo; q <= q_hi; ++q) {
        u128 m = 1;
        for (int i = 0; i < dims; ++i) {
            auto [lo, hi] = window(q, i);
            m *= hi >= lo ? hi - lo + 1 : 0;
        }
        predicted += m;
    }
    if (predicted > max_points) {
        throw ResourceError("localized count exceeds the point cap", std::to_string(static_cast<std::uint64_t>(predicted)));
    }

    const u128 cells_total = [&] {
        u128 c = 1;
        for (int i = 0; i < spec.d; ++i) c *= n;
        return c;
    }();
    const bool dense = cells_total <= (u128{1} << 26);
    std::vector<bool> seen_dense(dense ? static_cast<std::size_t>(cells_total) : 0, false);
    std::unordered_set<std::uint64_t> seen_sparse;

    for (std::uint64_t q = q_lo; q <= q_hi; ++q) {
        // local height index: largest i < n with x_d + i r <= q^-t
        const BigInt rhs = ipow(BigInt(xd.den) << r_level, spec.t.den);
        const BigInt qa = ipow(BigInt(q), spec.t.num);
        std::uint64_t lo_i = 0;
        std::uint64_t hi_i = n;
        while (hi_i - lo_i > 1) {
            const std::uint64_t mid = lo_i + (hi_i - lo_i) / 2;
            const BigInt lhs = ipow((BigInt(xd.num) << r_level) + BigInt(mid) * xd.den, spec.t.den) * qa;
            if (lhs <= rhs) lo_i = mid;
            else hi_i = mid;
        }
        const std::uint64_t h = lo_i;
        if (on_base && h == 0) continue;

        std::vector<std::vector<std::uint64_t>> axes(static_cast<std::size_t>(dims));
        bool empty = false;
        for (int i = 0; i < dims && !empty; ++i) {
            auto [lo, hi] = window(q, i);
            const SmallFraction c = x[static_cast<std::size_t>(i)];
            auto& axis = axes[static_cast<std::size_t>(i)];
            for (std::uint64_t p = lo; p <= hi && lo <= hi; ++p) {
                if (spec.variant == Variant::graph && std::gcd(p, q) != 1) continue;
                const u128 num = (static_cast<u128>(p) * c.den - static_cast<u128>(c.num) * q) << r_level;
                std::uint64_t idx = static_cast<std::uint64_t>(num / (static_cast<u128>(q) * c.den));
                idx = std::min(idx, n - 1);
                if (axis.empty() || axis.back() != idx) axis.push_back(idx);
            }
            empty = axis.empty();
        }
        if (empty) continue;

        std::vector<std::size_t> odo(static_cast<std::size_t>(dims), 0);
        while (true) {
            std::uint64_t linear = 0;
            for (int i = 0; i < dims; ++i) linear = linear * n + axes[static_cast<std::size_t>(i)][odo[static_cast<std::size_t>(i)]];
            linear = linear * n + h;
            if (dense) {
                if (!seen_dense[linear]) {
                    seen_dense[linear] = true;
                    ++out.point_cells;
                }
            } else if (seen_sparse.insert(linear).second) {
                ++out.point_cells;
            }
            int a = dims - 1;
            while (a >= 0) {
                auto& o = odo[static_cast<std::size_t>(a)];
                if (++o < axes[static_cast<std::size_t>(a)].size()) break;
                o = 0;
                --a;
            }
            if (a < 0) break;
        }
    }
    out.total = out.mesh_cells + out.point_cells;
    return out;
}

} // namespace popcorn
