#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "popcorn/covering.hpp"
#include "popcorn/rational.hpp"
#include "popcorn/sets.hpp"

namespace popcorn {

// Inequality suites shared by the CLI verify command and the acceptance runner.
// Each suite collects counterexamples instead of stopping at the first one.

struct SuiteResult {
    explicit SuiteResult(std::string suite = {}) : name(std::move(suite)) {}

    std::string name;
    std::uint64_t checks = 0;
    std::uint64_t failures = 0;
    std::vector<std::string> counterexamples; // first kMaxListed failures
    std::vector<std::string> notes;

    bool passed() const { return failures == 0 && checks > 0; }
    void fail(std::string what);
};

inline constexpr std::size_t kMaxListed = 20;

struct DuffinSchaefferGrid {
    std::uint64_t k_max = 200;
    int level_min = 4;
    int level_max = 12;
    int sample_d = 3;
    int samples = 1000;
    std::uint64_t seed = 1;
};

/// Exhaustive 1-d pairs 2 <= q < k <= k_max over delta = 2^-level, plus a seeded
/// sample of pairs for the (sample_d - 1)-dimensional bound with c = 4^{d-1}.
SuiteResult duffin_schaeffer_suite(const DuffinSchaefferGrid& grid);

struct TotientGrid {
    std::uint64_t n_max = 1'000'000;
    int samples = 1000;
    std::uint64_t seed = 1;
    double ratio_floor = 0.06;
};

SuiteResult totient_suite(const TotientGrid& grid);

/// admissible_k_range at every level; DomainError for a bad epsilon propagates.
SuiteResult epsilon_suite(const SetSpec& spec, int j_min, int j_max, const Rational& epsilon);

/// Chung-Erdos floor against the union measure of each admissible layer. Exact for d = 2;
/// for d >= 3 the floor is checked against the cover surrogate 3^{d-1} delta^{d-1} N.
SuiteResult chung_erdos_layer_suite(const SetSpec& spec, int j_min, int j_max, const Rational& epsilon);

/// Two-sided comparison between layer cover counts and the union measure:
/// delta^{d-1} N / 3^{d-1} <= U <= 3^{d-1} delta^{d-1} N (d = 2 exact).
SuiteResult layer_comparability_suite(const SetSpec& spec, int j_min, int j_max, const Rational& epsilon);

/// max over admissible k of (floor / delta^{d-1}) / layer_cover_count at one level.
Rational fit_cover_floor_constant(const SetSpec& spec, DyadicScale scale, const Rational& epsilon);

/// layer_cover_count >= (floor / delta^{d-1}) / constant on every admissible layer.
SuiteResult cover_floor_suite(const SetSpec& spec, const std::vector<int>& levels, const Rational& epsilon,
                              const Rational& constant);

/// popcorn_cells of cover_count against the sum of layer_cover_count over all layers.
SuiteResult two_path_suite(const SetSpec& spec, int j_min, int j_max, std::uint64_t max_points);

} // namespace popcorn
