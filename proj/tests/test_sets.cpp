#include <doctest.h>

#include <numeric>
#include <set>
#include <sstream>

#include "popcorn/errors.hpp"
#include "popcorn/sets.hpp"

using namespace popcorn;

namespace {

std::vector<RationalPoint> collect(PointEnumerator e) {
    std::vector<RationalPoint> out;
    RationalPoint p;
    while (e.next(p)) out.push_back(p);
    return out;
}

// naive count: loops over every tuple of numerators
std::uint64_t naive_count(int d, Variant v, std::uint64_t q_max) {
    std::uint64_t total = 0;
    for (std::uint64_t q = 2; q <= q_max; ++q) {
        std::uint64_t axis = 0;
        for (std::uint64_t m = 1; m < q; ++m) axis += v == Variant::full || std::gcd(m, q) == 1;
        std::uint64_t c = 1;
        for (int i = 0; i < d - 1; ++i) c *= axis;
        total += c;
    }
    return total;
}

} // namespace

TEST_CASE("spec validation and regime") {
    CHECK_THROWS_AS(SetSpec::make(Rational(0), 2), DomainError);
    CHECK_THROWS_AS(SetSpec::make(Rational(-1), 2), DomainError);
    CHECK_THROWS_AS(SetSpec::make(Rational(1), 1), DomainError);
    CHECK(SetSpec::make(Rational(1), 2).subcritical());
    CHECK_FALSE(SetSpec::make(Rational(2), 2).subcritical());
    CHECK(SetSpec::make(Rational(3, 2), 3).subcritical() == false);
    CHECK(SetSpec::make(Rational(7, 5), 3).subcritical());
    CHECK(parse_variant("full") == Variant::full);
    CHECK(to_string(Variant::graph) == "graph");
    CHECK_THROWS_AS(parse_variant("both"), DomainError);
}

TEST_CASE("evaluate examples") {
    const auto s3 = SetSpec::make(Rational(1), 3);
    const std::vector<Rational> mixed{Rational(1, 2), Rational(1, 3)};
    CHECK(evaluate(s3, mixed).is_zero());

    const auto s2 = SetSpec::make(Rational(1), 2);
    const std::vector<Rational> half{Rational(1, 2)};
    CHECK(evaluate(s2, half).q == 2);
    const std::vector<Rational> zero{Rational(0)};
    CHECK(evaluate(s2, zero).is_zero());
    const std::vector<Rational> one{Rational(1)};
    CHECK(evaluate(s2, one).is_zero());
    const std::vector<Rational> outside{Rational(3, 2)};
    CHECK_THROWS_AS(evaluate(s2, outside), DomainError);

    const std::vector<Rational> shared{Rational(1, 5), Rational(3, 5)};
    CHECK(evaluate(s3, shared).q == 5);
    const std::vector<Rational> wrong_len{Rational(1, 5)};
    CHECK_THROWS_AS(evaluate(s3, wrong_len), DomainError);
}

TEST_CASE("enumeration examples") {
    const auto g2 = collect(enumerate_points(SetSpec::make(Rational(1), 2), 4));
    REQUIRE(g2.size() == 5);
    CHECK(g2[0] == RationalPoint{{1}, 2});
    CHECK(g2[1] == RationalPoint{{1}, 3});
    CHECK(g2[2] == RationalPoint{{2}, 3});
    CHECK(g2[3] == RationalPoint{{1}, 4});
    CHECK(g2[4] == RationalPoint{{3}, 4});
    CHECK(collect(enumerate_points(SetSpec::make(Rational(1), 3), 3)).size() == 5);
    CHECK(collect(enumerate_points(SetSpec::make(Rational(1), 2, Variant::full), 3)).size() == 3);
}

TEST_CASE("enumeration counts match the naive oracle") {
    for (auto v : {Variant::graph, Variant::full}) {
        for (std::uint64_t q_max : {2, 3, 10, 100, 1000}) {
            const auto spec = SetSpec::make(Rational(1), 2, v);
            CHECK(predicted_point_count(spec, 2, q_max) == naive_count(2, v, q_max));
            if (q_max <= 100) CHECK(collect(enumerate_points(spec, q_max)).size() == naive_count(2, v, q_max));
        }
        for (std::uint64_t q_max : {2, 7, 40}) {
            for (int d : {3, 4}) {
                const auto spec = SetSpec::make(Rational(1), d, v);
                CHECK(collect(enumerate_points(spec, q_max)).size() == naive_count(d, v, q_max));
                CHECK(predicted_point_count(spec, 2, q_max) == naive_count(d, v, q_max));
            }
        }
    }
}

TEST_CASE("graph points are a subset of full points and evaluate back to their height") {
    for (int d : {2, 3}) {
        const auto graph = collect(enumerate_points(SetSpec::make(Rational(2, 3), d), 15));
        const auto full = collect(enumerate_points(SetSpec::make(Rational(2, 3), d, Variant::full), 15));
        std::set<std::pair<std::uint64_t, std::vector<std::uint64_t>>> in_full;
        for (const auto& p : full) in_full.insert({p.denominator, p.numerators});
        const auto spec = SetSpec::make(Rational(2, 3), d);
        for (const auto& p : graph) {
            CHECK(in_full.count({p.denominator, p.numerators}) == 1);
            std::vector<Rational> x;
            for (auto m : p.numerators) x.emplace_back(m, p.denominator);
            CHECK(evaluate(spec, x).q == p.denominator);
        }
    }
}

TEST_CASE("full variant keeps coincident locations with different heights") {
    const auto full = collect(enumerate_points(SetSpec::make(Rational(1), 2, Variant::full), 4));
    int at_half = 0;
    for (const auto& p : full) at_half += 2 * p.numerators[0] == p.denominator;
    CHECK(at_half == 2); // 1/2 and 2/4
}

TEST_CASE("budget errors carry the exact predicted count") {
    const auto spec = SetSpec::make(Rational(1), 2);
    try {
        enumerate_points(spec, 10, 5);
        FAIL("expected a resource error");
    } catch (const ResourceError& e) {
        CHECK(e.predicted() == "31"); // sum of phi(q), q = 2..10
    }
    CHECK_NOTHROW(enumerate_points(spec, 10, 31));
}

TEST_CASE("point dump format") {
    std::ostringstream os;
    PointEnumerator e = enumerate_points(SetSpec::make(Rational(1), 3), 3);
    CHECK(write_points(os, e) == 5);
    CHECK(os.str() == "2 1 1\n3 1 1\n3 1 2\n3 2 1\n3 2 2\n");
}
