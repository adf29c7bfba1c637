#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "popcorn/kernels.hpp"
#include "popcorn/rational.hpp"
#include "popcorn/sets.hpp"

namespace popcorn {

/// Mesh scale delta = 2^-level.
class DyadicScale {
public:
    explicit DyadicScale(int level);

    int level() const noexcept { return level_; }
    Rational delta() const;
    std::uint64_t cells_per_axis() const noexcept { return std::uint64_t{1} << level_; }

private:
    int level_;
};

/// Mesh cell of a point: d-1 spatial indices followed by the height index.
struct CellIndex {
    std::vector<std::uint64_t> index;
    friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

/// Grid cover of a set at one scale. total = base_cells + popcorn_cells.
struct CoverReport {
    DyadicScale scale;
    std::uint64_t total = 0;
    std::uint64_t base_cells = 0;
    std::uint64_t popcorn_cells = 0;
};

struct KRange {
    Rational epsilon;
    std::uint64_t k_min = 0;
    std::uint64_t k_max = 0;
};

struct LocalizedCount {
    std::uint64_t total = 0;
    std::uint64_t mesh_cells = 0;  // bottom row, covering the base plane and every point below r
    std::uint64_t point_cells = 0; // cells holding points above the bottom row
};

/// Half-open cells [i delta, (i+1) delta) with the last cell closed.
CellIndex cell_of(const SetSpec& spec, const RationalPoint& point, DyadicScale scale);

/// Denominators beyond this bound have height below delta: ceil(delta^{-1/t}).
std::uint64_t cover_q_max(const SetSpec& spec, DyadicScale scale);

/// Grid count at scale delta. The base row 2^{j(d-1)} covers the hyperplane and every point
/// with height below delta; the remaining cells come from the parallel row kernel.
CoverReport cover_count(const SetSpec& spec, DyadicScale scale, std::uint64_t max_points = kDefaultMaxPoints);

/// Same report computed point by point with the serial reference kernel.
CoverReport cover_count_reference(const SetSpec& spec, DyadicScale scale, std::uint64_t max_points = kDefaultMaxPoints);

/// CSV header and row for CoverReport: j,delta,total,base_cells,popcorn_cells.
void write_cover_csv_header(std::ostream& os);
void write_cover_csv_row(std::ostream& os, const CoverReport& report);

/// l_t(k, delta) = floor((1 / (k delta))^{1/t}); 0 when the value is below 1.
std::uint64_t layer_bound_index(const SetSpec& spec, DyadicScale scale, std::uint64_t k);

/// Graph points whose height lies in [k delta, (k+1) delta).
PointEnumerator layer_points(const SetSpec& spec, DyadicScale scale, std::uint64_t k);

/// Distinct spatial delta-cells occupied by layer_points(spec, scale, k).
std::uint64_t layer_cover_count(const SetSpec& spec, DyadicScale scale, std::uint64_t k);

/// Open upper bound on epsilon: (1/16) min{dt/(t+d) - t/(t+1), 1 - dt/(d+t)}.
Rational epsilon_cap(const SetSpec& spec);

/// [floor(delta^{dt/(t+d)-1-eps}), floor(delta^{t/(t+1)-1+eps})], with both layer properties checked
/// for every k in range. Throws DomainError for a bad epsilon or spec and VerificationError when
/// the range is empty or a property fails at this delta.
KRange admissible_k_range(const SetSpec& spec, DyadicScale scale, const Rational& epsilon);

/// Smallest j0 <= j_max such that admissible_k_range succeeds for every level in [j0, j_max].
std::optional<int> smallest_admissible_level(const SetSpec& spec, const Rational& epsilon, int j_max);

/// r-mesh cells meeting F intersected with the cube prod [x_i, x_i + R], R = 2^-R_level, r = 2^-r_level.
/// The mesh is anchored at the corner.
LocalizedCount localized_cover_count(const SetSpec& spec, std::span<const Rational> corner, int R_level, int r_level,
                                     std::uint64_t max_points = kDefaultMaxPoints);

} // namespace popcorn
