#include "popcorn/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>

#include "popcorn/errors.hpp"
#include "popcorn/number_theory.hpp"

namespace popcorn {

namespace {

using i128 = __int128;

BigInt to_big(i128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    BigInt out = BigInt(static_cast<std::uint64_t>(u >> 64));
    out <<= 64;
    out += BigInt(static_cast<std::uint64_t>(u));
    return neg ? BigInt(-out) : out;
}

struct SmallDelta {
    std::int64_t num;
    std::int64_t den;
};

SmallDelta small_delta(const Rational& delta) {
    if (delta <= 0) throw DomainError("delta must be positive, got " + to_string(delta));
    const BigInt num = boost::multiprecision::numerator(delta);
    const BigInt den = boost::multiprecision::denominator(delta);
    if (num >= (BigInt(1) << 40) || den >= (BigInt(1) << 40)) throw DomainError("delta " + to_string(delta) + " is too fine");
    return {num.convert_to<std::int64_t>(), den.convert_to<std::int64_t>()};
}

Endpoint min_endpoint(const Endpoint& a, const Endpoint& b) { return b < a ? b : a; }
Endpoint max_endpoint(const Endpoint& a, const Endpoint& b) { return a < b ? b : a; }

// Denominators of the layer's E-families.
std::pair<std::uint64_t, std::uint64_t> layer_range(const SetSpec& spec, DyadicScale scale, std::uint64_t k) {
    if (!spec.subcritical()) throw DomainError("layer measures assume t < d/(d-1)");
    const std::uint64_t high = layer_bound_index(spec, scale, k);
    const std::uint64_t low = k == scale.cells_per_axis() + 1 ? 0 : layer_bound_index(spec, scale, k + 1);
    return {std::max<std::uint64_t>(low + 1, 2), high};
}

std::vector<IntervalUnion> layer_families(const SetSpec& spec, DyadicScale scale, std::uint64_t k) {
    auto [first, last] = layer_range(spec, scale, k);
    std::vector<IntervalUnion> out;
    const Rational delta = scale.delta();
    for (std::uint64_t n = first; n <= last; ++n) out.push_back(approx_intervals(n, delta));
    return out;
}

Rational rational_pow(const Rational& x, int e) {
    Rational r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

} // namespace

IntervalUnion IntervalUnion::from_intervals(std::vector<Interval> intervals) {
    std::erase_if(intervals, [](const Interval& iv) { return !(iv.left < iv.right); });
    std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) { return a.left < b.left; });
    IntervalUnion out;
    for (const auto& iv : intervals) {
        // touching open intervals are merged; the shared endpoint has measure zero
        if (!out.intervals_.empty() && iv.left <= out.intervals_.back().right) {
            out.intervals_.back().right = max_endpoint(out.intervals_.back().right, iv.right);
        } else {
            out.intervals_.push_back(iv);
        }
    }
    return out;
}

Rational IntervalUnion::measure() const {
    // sum(right) - sum(left), accumulated per denominator before going to big rationals
    std::map<std::int64_t, i128> by_den;
    for (const auto& iv : intervals_) {
        by_den[iv.right.den] += iv.right.num;
        by_den[iv.left.den] -= iv.left.num;
    }
    Rational total = 0;
    for (const auto& [den, num] : by_den) {
        if (num != 0) total += Rational(to_big(num), BigInt(den));
    }
    return total;
}

IntervalUnion approx_intervals(std::uint64_t n, const Rational& delta, bool clip) {
    if (n < 2) throw DomainError("approx_intervals requires n >= 2");
    const SmallDelta d = small_delta(delta);
    if (static_cast<i128>(n) * d.den >= (i128{1} << 62)) throw DomainError("denominator n * den(delta) too large");
    const auto nn = static_cast<std::int64_t>(n);
    const std::int64_t den = nn * d.den;
    std::vector<Interval> raw;
    for (std::uint64_t m : coprime_residues(n)) {
        const auto mm = static_cast<std::int64_t>(m);
        Interval iv{{mm * d.den - d.num * nn, den}, {mm * d.den + d.num * nn, den}};
        if (clip) {
            iv.left = max_endpoint(iv.left, Endpoint{0, 1});
            iv.right = min_endpoint(iv.right, Endpoint{1, 1});
        }
        raw.push_back(iv);
    }
    return IntervalUnion::from_intervals(std::move(raw));
}

IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b) {
    std::vector<Interval> out;
    const auto ia = a.intervals();
    const auto ib = b.intervals();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ia.size() && j < ib.size()) {
        const Endpoint lo = max_endpoint(ia[i].left, ib[j].left);
        const Endpoint hi = min_endpoint(ia[i].right, ib[j].right);
        if (lo < hi) out.push_back({lo, hi});
        if (ia[i].right < ib[j].right) ++i;
        else ++j;
    }
    return IntervalUnion::from_intervals(std::move(out));
}

Rational union_measure(std::span<const IntervalUnion> families) {
    std::vector<Interval> all;
    for (const auto& f : families) all.insert(all.end(), f.intervals().begin(), f.intervals().end());
    return IntervalUnion::from_intervals(std::move(all)).measure();
}

Rational pair_intersection_measure_1d(std::uint64_t q, std::uint64_t k, const Rational& delta, bool clip) {
    if (q < 2 || k < 2) throw DomainError("denominators must be at least 2");
    if (q == k) throw DomainError("the overlap estimate concerns distinct denominators");
    return intersect(approx_intervals(q, delta, clip), approx_intervals(k, delta, clip)).measure();
}

Rational pair_intersection_measure(std::uint64_t q, std::uint64_t k, const Rational& delta, int d, bool clip) {
    if (d < 2) throw DomainError("d must be at least 2");
    return rational_pow(pair_intersection_measure_1d(q, k, delta, clip), d - 1);
}

Rational duffin_schaeffer_bound_1d(std::uint64_t q, std::uint64_t k, const Rational& delta) {
    return 4 * Rational(q) * Rational(k) * delta * delta;
}

Rational duffin_schaeffer_bound(std::uint64_t q, std::uint64_t k, const Rational& delta, int d) {
    return rational_pow(Rational(4), d - 1) * rational_pow(Rational(q) * Rational(k) * delta * delta, d - 1);
}

template <typename Real>
void validate_chung_erdos_input(std::span<const Real> singles, const std::vector<std::vector<Real>>& pairs) {
    auto close = [](const Real& a, const Real& b) {
        if constexpr (std::is_floating_point_v<Real>) {
            return std::abs(a - b) <= 1e-12 * std::max<Real>({Real(1), std::abs(a), std::abs(b)});
        } else {
            return a == b;
        }
    };
    auto at_most = [&](const Real& a, const Real& b) { return a <= b || close(a, b); };
    const std::size_t m = singles.size();
    if (m == 0) throw DomainError("Chung-Erdos bound needs at least one event");
    if (pairs.size() != m) throw DomainError("overlap matrix must be " + std::to_string(m) + " x " + std::to_string(m));
    bool positive = false;
    for (std::size_t i = 0; i < m; ++i) {
        if (pairs[i].size() != m) throw DomainError("overlap matrix must be square");
        if (singles[i] < 0) throw DomainError("negative event measure");
        positive = positive || singles[i] > 0;
        if (!close(pairs[i][i], singles[i])) throw DomainError("overlap diagonal must equal the single measures");
        for (std::size_t j = 0; j < m; ++j) {
            if (!close(pairs[i][j], pairs[j][i])) throw DomainError("overlap matrix must be symmetric");
            if (pairs[i][j] < 0) throw DomainError("negative overlap measure");
            if (!at_most(pairs[i][j], std::min(singles[i], singles[j]))) {
                throw DomainError("overlap exceeds an event measure at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
            }
        }
    }
    if (!positive) throw DomainError("Chung-Erdos bound needs at least one event of positive measure");
}

template void validate_chung_erdos_input<double>(std::span<const double>, const std::vector<std::vector<double>>&);
template void validate_chung_erdos_input<Rational>(std::span<const Rational>, const std::vector<std::vector<Rational>>&);

double chung_erdos_bound(std::span<const double> singles, const std::vector<std::vector<double>>& pairs) {
    validate_chung_erdos_input(singles, pairs);
    double sum = 0;
    double pair_sum = 0;
    for (std::size_t i = 0; i < singles.size(); ++i) {
        sum += singles[i];
        for (double v : pairs[i]) pair_sum += v;
    }
    return sum * sum / pair_sum;
}

Rational chung_erdos_bound(std::span<const Rational> singles, const std::vector<std::vector<Rational>>& pairs) {
    validate_chung_erdos_input(singles, pairs);
    Rational sum = 0;
    Rational pair_sum = 0;
    for (std::size_t i = 0; i < singles.size(); ++i) {
        sum += singles[i];
        for (const auto& v : pairs[i]) pair_sum += v;
    }
    return sum * sum / pair_sum;
}

Rational layer_sum_measure(const SetSpec& spec, DyadicScale scale, std::uint64_t k) {
    Rational total = 0;
    for (const auto& f : layer_families(spec, scale, k)) total += rational_pow(f.measure(), spec.d - 1);
    return total;
}

Rational layer_pair_sum(const SetSpec& spec, DyadicScale scale, std::uint64_t k) {
    const auto families = layer_families(spec, scale, k);
    Rational diagonal = 0;
    Rational off = 0;
    for (std::size_t i = 0; i < families.size(); ++i) {
        diagonal += rational_pow(families[i].measure(), spec.d - 1);
        for (std::size_t j = i + 1; j < families.size(); ++j) {
            const IntervalUnion both = intersect(families[i], families[j]);
            if (!both.empty()) off += rational_pow(both.measure(), spec.d - 1);
        }
    }
    return diagonal + 2 * off;
}

Rational chung_erdos_layer_floor(const SetSpec& spec, DyadicScale scale, std::uint64_t k) {
    const Rational sum = layer_sum_measure(spec, scale, k);
    if (sum == 0) throw DomainError("layer k = " + std::to_string(k) + " is empty");
    return sum * sum / layer_pair_sum(spec, scale, k);
}

Rational layer_union_measure(const SetSpec& spec, DyadicScale scale, std::uint64_t k) {
    if (spec.d != 2) throw DomainError("exact union measure is implemented for d = 2 only");
    const auto families = layer_families(spec, scale, k);
    return union_measure(families);
}

LayerDiagnostics layer_diagnostics(const SetSpec& spec, DyadicScale scale, std::uint64_t k) {
    LayerDiagnostics row;
    row.k = k;
    row.l_high = layer_bound_index(spec, scale, k);
    row.l_low = k == scale.cells_per_axis() + 1 ? 0 : layer_bound_index(spec, scale, k + 1);
    row.sum_measure = layer_sum_measure(spec, scale, k);
    row.pair_sum = layer_pair_sum(spec, scale, k);
    row.ce_floor = row.sum_measure == 0 ? Rational(0) : Rational(row.sum_measure * row.sum_measure / row.pair_sum);
    row.cover_count = layer_cover_count(spec, scale, k);
    return row;
}

void write_layer_csv_header(std::ostream& os) { os << "k,l_low,l_high,sum_measure,pair_sum,ce_floor,cover_count\n"; }

void write_layer_csv_row(std::ostream& os, const LayerDiagnostics& row) {
    char buf[64];
    auto dec = [&](const Rational& v) {
        std::snprintf(buf, sizeof buf, "%.17g", to_double(v));
        return std::string(buf);
    };
    os << row.k << ',' << row.l_low << ',' << row.l_high << ',' << dec(row.sum_measure) << ',' << dec(row.pair_sum) << ','
       << dec(row.ce_floor) << ',' << row.cover_count << '\n';
}

} // namespace popcorn
