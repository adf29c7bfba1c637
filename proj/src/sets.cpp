#include "popcorn/sets.hpp"

#include <ostream>

#include "popcorn/errors.hpp"
#include "popcorn/number_theory.hpp"

namespace popcorn {

Variant parse_variant(std::string_view text) {
    if (text == "graph") return Variant::graph;
    if (text == "full") return Variant::full;
    throw DomainError("variant must be graph or full, got " + std::string(text));
}

std::string to_string(Variant variant) { return variant == Variant::graph ? "graph" : "full"; }

SetSpec SetSpec::make(const Rational& t, int d, Variant variant) {
    if (t <= 0) throw DomainError("t must be positive, got " + to_string(t));
    if (d < 2) throw DomainError("d must be at least 2, got " + std::to_string(d));
    const BigInt num = boost::multiprecision::numerator(t);
    const BigInt den = boost::multiprecision::denominator(t);
    if (num > 0xFFFFFFFFu || den > 0xFFFFFFFFu) throw DomainError("t has too large a numerator or denominator: " + to_string(t));
    return SetSpec{{num.convert_to<std::uint32_t>(), den.convert_to<std::uint32_t>()}, d, variant};
}

bool SetSpec::subcritical() const {
    // a/b < d/(d-1)  <=>  a (d-1) < b d
    return std::uint64_t{t.num} * static_cast<std::uint64_t>(d - 1) < std::uint64_t{t.den} * static_cast<std::uint64_t>(d);
}

Height evaluate(const SetSpec& spec, std::span<const Rational> x) {
    if (x.size() != static_cast<std::size_t>(spec.d - 1)) {
        throw DomainError("evaluate expects " + std::to_string(spec.d - 1) + " coordinates");
    }
    for (const auto& xi : x) {
        if (xi < 0 || xi > 1) throw DomainError("coordinate " + to_string(xi) + " outside [0,1]");
    }
    const BigInt q = boost::multiprecision::denominator(x.front());
    for (const auto& xi : x) {
        // reduced form is maintained by cpp_rational, so 0 and 1 have denominator 1
        if (boost::multiprecision::denominator(xi) != q || q < 2) return Height{0, spec.t};
    }
    return Height{q.convert_to<std::uint64_t>(), spec.t};
}

BigInt predicted_point_count(const SetSpec& spec, std::uint64_t q_min, std::uint64_t q_max) {
    BigInt total = 0;
    if (q_max < 2 || q_min > q_max) return total;
    q_min = std::max<std::uint64_t>(q_min, 2);
    const unsigned power = static_cast<unsigned>(spec.d - 1);
    if (spec.variant == Variant::graph) {
        const TotientTable table = totient_sieve(q_max);
        for (std::uint64_t q = q_min; q <= q_max; ++q) total += ipow(BigInt(table[q]), power);
    } else {
        for (std::uint64_t q = q_min; q <= q_max; ++q) total += ipow(BigInt(q - 1), power);
    }
    return total;
}

void check_point_budget(const SetSpec& spec, std::uint64_t q_min, std::uint64_t q_max, std::uint64_t max_points) {
    const BigInt predicted = predicted_point_count(spec, q_min, q_max);
    if (predicted > max_points) {
        throw ResourceError("enumeration up to q = " + std::to_string(q_max) + " exceeds the cap of " +
                                std::to_string(max_points) + " points",
                            predicted.str());
    }
}

PointEnumerator::PointEnumerator(const SetSpec& spec, std::uint64_t q_min, std::uint64_t q_max)
    : spec_(spec), q_(std::max<std::uint64_t>(q_min, 2)), q_max_(q_max), odometer_(static_cast<std::size_t>(spec.d - 1), 0) {}

bool PointEnumerator::load_denominator() {
    while (q_ <= q_max_) {
        if (spec_.variant == Variant::graph) {
            residues_ = coprime_residues(q_);
        } else {
            residues_.resize(q_ - 1);
            for (std::uint64_t m = 1; m < q_; ++m) residues_[m - 1] = m;
        }
        std::fill(odometer_.begin(), odometer_.end(), 0);
        if (!residues_.empty()) return true;
        ++q_;
    }
    return false;
}

bool PointEnumerator::next(RationalPoint& out) {
    if (fresh_) {
        fresh_ = false;
        if (!load_denominator()) return false;
    } else {
        // advance the odometer, last coordinate fastest
        std::size_t axis = odometer_.size();
        while (axis > 0) {
            --axis;
            if (++odometer_[axis] < residues_.size()) break;
            odometer_[axis] = 0;
            if (axis == 0) {
                ++q_;
                if (!load_denominator()) return false;
            }
        }
    }
    if (q_ > q_max_) return false;
    out.denominator = q_;
    out.numerators.resize(odometer_.size());
    for (std::size_t i = 0; i < odometer_.size(); ++i) out.numerators[i] = residues_[odometer_[i]];
    return true;
}

PointEnumerator enumerate_points(const SetSpec& spec, std::uint64_t q_max, std::uint64_t max_points) {
    if (q_max < 2) throw DomainError("q_max must be at least 2");
    check_point_budget(spec, 2, q_max, max_points);
    return PointEnumerator(spec, 2, q_max);
}

std::size_t write_points(std::ostream& os, PointEnumerator& points) {
    RationalPoint p;
    std::size_t n = 0;
    while (points.next(p)) {
        os << p.denominator;
        for (auto m : p.numerators) os << ' ' << m;
        os << '\n';
        ++n;
    }
    return n;
}

} // namespace popcorn
