#include "popcorn/suites.hpp"

#include <random>
#include <sstream>

#include "popcorn/errors.hpp"
#include "popcorn/measure.hpp"
#include "popcorn/number_theory.hpp"

namespace popcorn {

void SuiteResult::fail(std::string what) {
    ++failures;
    if (counterexamples.size() < kMaxListed) counterexamples.push_back(std::move(what));
}

namespace {

Rational dyadic(int level) { return Rational(BigInt(1), BigInt(1) << level); }

Rational power(const Rational& x, int e) {
    Rational r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

void check_levels(int j_min, int j_max) {
    if (j_min < 1 || j_max < j_min) {
        throw DomainError("need 1 <= j_min <= j_max, got " + std::to_string(j_min) + ", " + std::to_string(j_max));
    }
}

std::string at(int j, std::uint64_t k) { return "j=" + std::to_string(j) + " k=" + std::to_string(k); }

} // namespace

SuiteResult duffin_schaeffer_suite(const DuffinSchaefferGrid& grid) {
    if (grid.k_max < 3 || grid.level_min < 1 || grid.level_max < grid.level_min || grid.sample_d < 2) {
        throw DomainError("malformed Duffin-Schaeffer grid");
    }
    SuiteResult out{"duffin-schaeffer"};
    for (int level = grid.level_min; level <= grid.level_max; ++level) {
        const Rational delta = dyadic(level);
        for (std::uint64_t k = 3; k <= grid.k_max; ++k) {
            for (std::uint64_t q = 2; q < k; ++q) {
                ++out.checks;
                const Rational lhs = pair_intersection_measure_1d(q, k, delta);
                const Rational rhs = duffin_schaeffer_bound_1d(q, k, delta);
                if (lhs > rhs) {
                    out.fail("d=2 q=" + std::to_string(q) + " k=" + std::to_string(k) + " delta=" + to_string(delta) +
                             ": " + to_string(lhs) + " > " + to_string(rhs));
                }
            }
        }
    }
    std::mt19937_64 rng(grid.seed);
    const int levels = grid.level_max - grid.level_min + 1;
    for (int i = 0; i < grid.samples; ++i) {
        const std::uint64_t k = 3 + rng() % (grid.k_max - 2);
        const std::uint64_t q = 2 + rng() % (k - 2);
        const int level = grid.level_min + static_cast<int>(rng() % static_cast<std::uint64_t>(levels));
        const Rational delta = dyadic(level);
        ++out.checks;
        const Rational lhs = pair_intersection_measure(q, k, delta, grid.sample_d);
        const Rational rhs = duffin_schaeffer_bound(q, k, delta, grid.sample_d);
        if (lhs > rhs) {
            out.fail("d=" + std::to_string(grid.sample_d) + " q=" + std::to_string(q) + " k=" + std::to_string(k) +
                     " delta=" + to_string(delta) + ": " + to_string(lhs) + " > " + to_string(rhs));
        }
    }
    return out;
}

SuiteResult totient_suite(const TotientGrid& grid) {
    if (grid.n_max < 3) throw DomainError("totient grid needs n_max >= 3");
    SuiteResult out{"totient"};
    const TotientTable table = totient_sieve(grid.n_max);
    std::mt19937_64 rng(grid.seed);
    for (int i = 0; i < grid.samples; ++i) {
        const std::uint64_t n = 2 + rng() % (grid.n_max - 1);
        ++out.checks;
        const std::uint64_t direct = totient(n);
        if (table[n] != direct) {
            out.fail("phi(" + std::to_string(n) + "): sieve " + std::to_string(table[n]) + ", direct " + std::to_string(direct));
        }
    }
    const GrowthRatioFloor floor_at = scan_growth_ratio(table);
    out.checks += grid.n_max - 2;
    if (!(floor_at.minimum > grid.ratio_floor)) {
        out.fail("growth ratio " + std::to_string(floor_at.minimum) + " at n=" + std::to_string(floor_at.argmin));
    }
    std::ostringstream note;
    note.precision(6);
    note << "minimum growth ratio " << floor_at.minimum << " at n=" << floor_at.argmin;
    out.notes.push_back(note.str());
    return out;
}

SuiteResult epsilon_suite(const SetSpec& spec, int j_min, int j_max, const Rational& epsilon) {
    check_levels(j_min, j_max);
    SuiteResult out{"epsilon"};
    for (int j = j_min; j <= j_max; ++j) {
        ++out.checks;
        try {
            const KRange r = admissible_k_range(spec, DyadicScale(j), epsilon);
            out.notes.push_back("j=" + std::to_string(j) + " k in [" + std::to_string(r.k_min) + ", " +
                                std::to_string(r.k_max) + "]");
        } catch (const VerificationError& e) {
            out.fail("j=" + std::to_string(j) + ": " + e.what());
        }
    }
    return out;
}

SuiteResult chung_erdos_layer_suite(const SetSpec& spec, int j_min, int j_max, const Rational& epsilon) {
    check_levels(j_min, j_max);
    SuiteResult out{"chung-erdos"};
    const int dims = spec.d - 1;
    for (int j = j_min; j <= j_max; ++j) {
        const DyadicScale scale(j);
        const KRange r = admissible_k_range(spec, scale, epsilon);
        for (std::uint64_t k = r.k_min; k <= r.k_max; ++k) {
            ++out.checks;
            const Rational floor_value = chung_erdos_layer_floor(spec, scale, k);
            Rational bound;
            if (spec.d == 2) {
                bound = layer_union_measure(spec, scale, k);
            } else {
                bound = power(Rational(3) * scale.delta(), dims) * layer_cover_count(spec, scale, k);
            }
            if (floor_value > bound) out.fail(at(j, k) + ": floor " + to_string(floor_value) + " > " + to_string(bound));
        }
    }
    return out;
}

SuiteResult layer_comparability_suite(const SetSpec& spec, int j_min, int j_max, const Rational& epsilon) {
    check_levels(j_min, j_max);
    SuiteResult out{"layers"};
    const int dims = spec.d - 1;
    for (int j = j_min; j <= j_max; ++j) {
        const DyadicScale scale(j);
        const KRange r = admissible_k_range(spec, scale, epsilon);
        const Rational cell = power(scale.delta(), dims);
        const Rational spread = power(Rational(3), dims);
        for (std::uint64_t k = r.k_min; k <= r.k_max; ++k) {
            ++out.checks;
            const std::uint64_t n = layer_cover_count(spec, scale, k);
            const Rational mass = cell * n;
            if (spec.d == 2) {
                const Rational u = layer_union_measure(spec, scale, k);
                if (u < mass / spread || u > mass * spread) {
                    out.fail(at(j, k) + ": union " + to_string(u) + " outside [" + to_string(mass / spread) + ", " +
                             to_string(mass * spread) + "]");
                }
            } else {
                const Rational floor_value = chung_erdos_layer_floor(spec, scale, k);
                if (floor_value > mass * spread) {
                    out.fail(at(j, k) + ": floor " + to_string(floor_value) + " > " + to_string(mass * spread));
                }
            }
        }
    }
    return out;
}

Rational fit_cover_floor_constant(const SetSpec& spec, DyadicScale scale, const Rational& epsilon) {
    const KRange r = admissible_k_range(spec, scale, epsilon);
    const Rational cell = power(scale.delta(), spec.d - 1);
    Rational best = 0;
    for (std::uint64_t k = r.k_min; k <= r.k_max; ++k) {
        const std::uint64_t n = layer_cover_count(spec, scale, k);
        if (n == 0) throw VerificationError("empty layer inside the admissible range at " + at(scale.level(), k));
        best = std::max(best, chung_erdos_layer_floor(spec, scale, k) / cell / n);
    }
    return best;
}

SuiteResult cover_floor_suite(const SetSpec& spec, const std::vector<int>& levels, const Rational& epsilon,
                              const Rational& constant) {
    if (constant <= 0) throw DomainError("the comparability constant must be positive");
    SuiteResult out{"cover-floor"};
    for (int j : levels) {
        const DyadicScale scale(j);
        const KRange r = admissible_k_range(spec, scale, epsilon);
        const Rational cell = power(scale.delta(), spec.d - 1);
        for (std::uint64_t k = r.k_min; k <= r.k_max; ++k) {
            ++out.checks;
            const std::uint64_t n = layer_cover_count(spec, scale, k);
            const Rational needed = chung_erdos_layer_floor(spec, scale, k) / cell / constant;
            if (Rational(n) < needed) out.fail(at(j, k) + ": count " + std::to_string(n) + " < " + to_string(needed));
        }
    }
    return out;
}

SuiteResult two_path_suite(const SetSpec& spec, int j_min, int j_max, std::uint64_t max_points) {
    check_levels(j_min, j_max);
    SuiteResult out{"two-path"};
    for (int j = j_min; j <= j_max; ++j) {
        const DyadicScale scale(j);
        const CoverReport report = cover_count(spec, scale, max_points);
        std::uint64_t sum = 0;
        for (std::uint64_t k = 1; k < scale.cells_per_axis(); ++k) sum += layer_cover_count(spec, scale, k);
        ++out.checks;
        if (sum != report.popcorn_cells) {
            out.fail("j=" + std::to_string(j) + ": kernel " + std::to_string(report.popcorn_cells) + ", layers " +
                     std::to_string(sum));
        }
    }
    return out;
}

} // namespace popcorn
