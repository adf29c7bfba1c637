#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "popcorn/covering.hpp"
#include "popcorn/rational.hpp"
#include "popcorn/sets.hpp"

namespace popcorn {

// Closed forms. All exact.

Rational hausdorff_dim(const SetSpec& spec);

/// d^2/(d+t) below the critical exponent t = d/(d-1), d-1 from there on.
Rational box_dim_formula(const SetSpec& spec);

Rational assouad_dim_formula(const SetSpec& spec);

/// (d-1) t / d, where the intermediate dimensions leave d-1.
Rational phase_transition(const SetSpec& spec);

/// d-1 up to the phase transition and d^2 theta / (d theta + t) after it.
/// For t >= d/(d-1) every dimension collapses to d-1.
Rational intermediate_dim_formula(const SetSpec& spec, const Rational& theta);

/// Upper interpolation bound for dim_phi given dim_theta and the Assouad dimension (0 < theta <= phi <= 1).
template <typename Real>
Real general_upper_bound(const Real& dim_at_theta, const Real& theta, const Real& phi, const Real& dim_a);

/// Lower bound theta dim_A box / (dim_A - (1 - theta) box).
template <typename Real>
Real general_lower_bound(const Real& box, const Real& theta, const Real& dim_a);

/// ((d-1) t2 + t1) / (d t2) for 0 < t1 < t2 <= d/(d-1).
Rational holder_exponent_bound(int d, const Rational& t1, const Rational& t2);

struct DimensionReport {
    SetSpec spec;
    Rational hausdorff;
    Rational box;
    Rational assouad;
    std::vector<std::pair<Rational, Rational>> theta_profile;
    bool collapsed = false; // t >= d/(d-1): profile values follow from the collapse of all dimensions
};

/// Closed-form report with theta on the uniform grid i / (grid_points - 1).
DimensionReport dimension_report(const SetSpec& spec, int grid_points = 101);

/// {t, d, variant, hausdorff, box, assouad, profile: [[theta, dim]]} with rationals as "p/q",
/// plus decimal renderings under "decimal" and "profile_decimal".
nlohmann::json to_json(const DimensionReport& report);

struct BoxFit {
    double slope = 0;           // least squares slope of log2 N against j
    double intercept = 0;
    double last_pair_slope = 0; // slope through the two finest scales
    double residual_rms = 0;
};

BoxFit fit_box_dimension(std::span<const std::pair<int, std::uint64_t>> counts);

/// Two-scale cover: delta-mesh cells for the part of the set below height 2^-split_level
/// (the base plane included) and 2^-fine_level mesh cells for the points above it.
struct TwoScaleCover {
    Rational theta;
    int level = 0;       // delta = 2^-level
    int split_level = 0; // split height 2^-split_level, snapped from delta^{dt/(d theta + t)}
    int fine_level = 0;  // floor(level / theta), so 2^-fine_level >= delta^{1/theta}
    Rational split_height_exponent;
    std::uint64_t coarse_cells = 0;
    std::uint64_t fine_cells = 0;

    /// coarse_cells 2^{-level s} + fine_cells 2^{-fine_level s}
    double cost(double s) const;
};

TwoScaleCover build_two_scale_cover(const SetSpec& spec, const Rational& theta, DyadicScale scale,
                                    std::uint64_t max_points = kDefaultMaxPoints);

struct CoverCost {
    Rational theta;
    DyadicScale scale;
    double s;
    double cost;
    Rational split_height_exponent;
    int split_level;
    int fine_level;
};

CoverCost two_scale_cover_cost(const SetSpec& spec, const Rational& theta, DyadicScale scale, double s,
                               std::uint64_t max_points = kDefaultMaxPoints);

/// Root of cost(s) = 1 on [0, d] by bisection.
double critical_exponent(const TwoScaleCover& cover, int d, double tolerance = 1e-3);
double critical_exponent(const SetSpec& spec, const Rational& theta, DyadicScale scale,
                         std::uint64_t max_points = kDefaultMaxPoints);

struct AssouadProbe {
    std::vector<Rational> corner;
    int R_level = 0;
    int r_level = 0;
    std::uint64_t count = 0;
    double exponent = 0; // log(count) / log(R/r)
};

struct AssouadEstimate {
    double max_exponent = 0;
    std::vector<AssouadProbe> probes;
};

struct AssouadProbeConfig {
    int probes = 64;
    std::uint64_t seed = 1;
    std::vector<int> ratio_levels{4, 6}; // R/r = 2^m
    int max_R_level = 6;
    std::uint64_t corner_q_max = 32;
};

/// Localized counts at seeded corners: the origin plus corners snapped from random graph points.
AssouadEstimate estimate_assouad(const SetSpec& spec, const AssouadProbeConfig& config,
                                 std::uint64_t max_points = kDefaultMaxPoints);

} // namespace popcorn
