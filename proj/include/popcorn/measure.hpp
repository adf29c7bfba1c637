#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "popcorn/covering.hpp"
#include "popcorn/rational.hpp"
#include "popcorn/sets.hpp"

namespace popcorn {

/// Exact endpoint num/den with den > 0; compared by 128-bit cross multiplication.
struct Endpoint {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational value() const { return Rational(num, den); }
    friend bool operator==(const Endpoint& a, const Endpoint& b) {
        return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<(const Endpoint& a, const Endpoint& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Endpoint& a, const Endpoint& b) { return !(b < a); }
};

/// Open interval (left, right).
struct Interval {
    Endpoint left;
    Endpoint right;
};

/// Sorted, pairwise disjoint open intervals.
class IntervalUnion {
public:
    IntervalUnion() = default;

    /// Sorts and merges arbitrary intervals; empty intervals are dropped.
    static IntervalUnion from_intervals(std::vector<Interval> intervals);

    std::span<const Interval> intervals() const noexcept { return intervals_; }
    bool empty() const noexcept { return intervals_.empty(); }
    Rational measure() const;

private:
    std::vector<Interval> intervals_;
};

/// E^(1)(delta, n): union of (m/n - delta, m/n + delta) over residues m coprime to n,
/// merged, and clipped to [0,1] when `clip` is set.
IntervalUnion approx_intervals(std::uint64_t n, const Rational& delta, bool clip = true);

IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b);

/// Lebesgue measure of the union of the families, by endpoint sweep.
Rational union_measure(std::span<const IntervalUnion> families);

/// L1(E^(1)(delta,q) intersect E^(1)(delta,k)) for q != k.
Rational pair_intersection_measure_1d(std::uint64_t q, std::uint64_t k, const Rational& delta, bool clip = true);

/// (d-1)-dimensional overlap: the 1d overlap raised to the power d-1.
Rational pair_intersection_measure(std::uint64_t q, std::uint64_t k, const Rational& delta, int d, bool clip = true);

/// 4 q k delta^2, the one-dimensional overlap bound.
Rational duffin_schaeffer_bound_1d(std::uint64_t q, std::uint64_t k, const Rational& delta);

/// 4^{d-1} (q k delta^2)^{d-1}.
Rational duffin_schaeffer_bound(std::uint64_t q, std::uint64_t k, const Rational& delta, int d);

/// Checks that `pairs` is a consistent symmetric overlap matrix for `singles`:
/// square, symmetric, diagonal equal to singles, entries in [0, min(single_k, single_l)],
/// and at least one positive single. Throws DomainError otherwise.
template <typename Real>
void validate_chung_erdos_input(std::span<const Real> singles, const std::vector<std::vector<Real>>& pairs);

/// (sum mu(A_j))^2 / sum_k sum_l mu(A_k & A_l).
double chung_erdos_bound(std::span<const double> singles, const std::vector<std::vector<double>>& pairs);
Rational chung_erdos_bound(std::span<const Rational> singles, const std::vector<std::vector<Rational>>& pairs);

/// Sum over the layer's denominators of L_{d-1}(E^(d-1)(delta, n)).
Rational layer_sum_measure(const SetSpec& spec, DyadicScale scale, std::uint64_t k);

/// Double sum of pairwise overlaps over the layer's denominators, diagonal included.
Rational layer_pair_sum(const SetSpec& spec, DyadicScale scale, std::uint64_t k);

/// layer_sum^2 / layer_pair_sum: certified lower bound on the measure of the layer's E-union.
Rational chung_erdos_layer_floor(const SetSpec& spec, DyadicScale scale, std::uint64_t k);

/// Exact measure of the layer's E-union. Only d = 2; higher d uses delta^{d-1} layer_cover_count.
Rational layer_union_measure(const SetSpec& spec, DyadicScale scale, std::uint64_t k);

struct LayerDiagnostics {
    std::uint64_t k = 0;
    std::uint64_t l_low = 0;  // l_t(k+1, delta)
    std::uint64_t l_high = 0; // l_t(k, delta)
    Rational sum_measure;
    Rational pair_sum;
    Rational ce_floor;
    std::uint64_t cover_count = 0;
};

LayerDiagnostics layer_diagnostics(const SetSpec& spec, DyadicScale scale, std::uint64_t k);

/// CSV: k,l_low,l_high,sum_measure,pair_sum,ce_floor,cover_count (measures as decimals).
void write_layer_csv_header(std::ostream& os);
void write_layer_csv_row(std::ostream& os, const LayerDiagnostics& row);

} // namespace popcorn
