#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "popcorn/rational.hpp"

namespace popcorn {

enum class Variant { graph, full };

Variant parse_variant(std::string_view text);
std::string to_string(Variant variant);

/// Positive rational exponent t = num / den in lowest terms.
struct Exponent {
    std::uint32_t num = 1;
    std::uint32_t den = 1;

    Rational value() const { return Rational(num, den); }
    friend bool operator==(const Exponent&, const Exponent&) = default;
};

/// Identifies G_{t,d} (graph) or F_{t,d} (full).
struct SetSpec {
    Exponent t;
    int d = 2;
    Variant variant = Variant::graph;

    /// Validates t > 0, d >= 2 and that t fits the 32-bit exponent representation.
    static SetSpec make(const Rational& t, int d, Variant variant = Variant::graph);

    /// t < d/(d-1), decided exactly.
    bool subcritical() const;
};

/// (p_1/q, ..., p_{d-1}/q, q^-t) with exact integer numerators.
struct RationalPoint {
    std::vector<std::uint64_t> numerators;
    std::uint64_t denominator = 0;

    friend bool operator==(const RationalPoint&, const RationalPoint&) = default;
};

/// Either zero (q == 0) or the height q^-t.
struct Height {
    std::uint64_t q = 0;
    Exponent t;

    bool is_zero() const noexcept { return q == 0; }
};

/// Pointwise value of the pyramid function at a rational tuple in [0,1]^{d-1}.
/// The value does not depend on the variant.
Height evaluate(const SetSpec& spec, std::span<const Rational> x);

/// Default budget on the number of enumerated points.
inline constexpr std::uint64_t kDefaultMaxPoints = 1'000'000'000;

/// Exact number of points with q_min <= q <= q_max: sum of phi(q)^{d-1} (graph) or (q-1)^{d-1} (full).
BigInt predicted_point_count(const SetSpec& spec, std::uint64_t q_min, std::uint64_t q_max);

/// Throws ResourceError naming the predicted count when it exceeds max_points.
void check_point_budget(const SetSpec& spec, std::uint64_t q_min, std::uint64_t q_max, std::uint64_t max_points);

/// Streams the points with q_min <= q <= q_max in (q ascending, numerators lexicographic) order.
/// The hyperplane at height zero is never produced.
class PointEnumerator {
public:
    PointEnumerator(const SetSpec& spec, std::uint64_t q_min, std::uint64_t q_max);

    /// Writes the next point into `out`; false once the stream is exhausted.
    bool next(RationalPoint& out);

private:
    bool load_denominator();

    SetSpec spec_;
    std::uint64_t q_;
    std::uint64_t q_max_;
    std::vector<std::uint64_t> residues_;
    std::vector<std::size_t> odometer_;
    bool fresh_ = true;
};

/// Stream over 2 <= q <= q_max after checking the point budget.
PointEnumerator enumerate_points(const SetSpec& spec, std::uint64_t q_max, std::uint64_t max_points = kDefaultMaxPoints);

/// Dump format: one line per point, "q p_1 ... p_{d-1}".
std::size_t write_points(std::ostream& os, PointEnumerator& points);

} // namespace popcorn
