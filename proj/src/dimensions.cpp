#include "popcorn/dimensions.hpp"

#include <cmath>
#include <random>
#include <string>

#include "popcorn/errors.hpp"
#include "popcorn/kernels.hpp"
#include "popcorn/number_theory.hpp"

namespace popcorn {

Rational hausdorff_dim(const SetSpec& spec) { return Rational(spec.d - 1); }

Rational box_dim_formula(const SetSpec& spec) {
    if (!spec.subcritical()) return Rational(spec.d - 1);
    const Rational d = spec.d;
    return d * d / (d + spec.t.value());
}

Rational assouad_dim_formula(const SetSpec& spec) { return Rational(spec.subcritical() ? spec.d : spec.d - 1); }

Rational phase_transition(const SetSpec& spec) { return Rational(spec.d - 1) * spec.t.value() / spec.d; }

Rational intermediate_dim_formula(const SetSpec& spec, const Rational& theta) {
    if (theta < 0 || theta > 1) throw DomainError("theta must lie in [0,1], got " + to_string(theta));
    if (!spec.subcritical() || theta <= phase_transition(spec)) return Rational(spec.d - 1);
    const Rational d = spec.d;
    return d * d * theta / (d * theta + spec.t.value());
}

template <typename Real>
Real general_upper_bound(const Real& dim_at_theta, const Real& theta, const Real& phi, const Real& dim_a) {
    if (!(theta > 0)) throw DomainError("the upper interpolation bound needs theta > 0");
    if (phi < theta || phi > 1) throw DomainError("the upper interpolation bound needs theta <= phi <= 1");
    const Real gap = phi - theta;
    const Real den = gap * dim_at_theta + theta * dim_a;
    if (den == 0) throw DomainError("degenerate interpolation bound");
    return dim_at_theta + dim_at_theta * (dim_a - dim_at_theta) / den * gap;
}

template <typename Real>
Real general_lower_bound(const Real& box, const Real& theta, const Real& dim_a) {
    if (!(theta > 0) || theta > 1) throw DomainError("the lower interpolation bound needs 0 < theta <= 1");
    const Real den = dim_a - (1 - theta) * box;
    if (den == 0) throw DomainError("vanishing denominator in the lower interpolation bound");
    return theta * dim_a * box / den;
}

template double general_upper_bound<double>(const double&, const double&, const double&, const double&);
template Rational general_upper_bound<Rational>(const Rational&, const Rational&, const Rational&, const Rational&);
template double general_lower_bound<double>(const double&, const double&, const double&);
template Rational general_lower_bound<Rational>(const Rational&, const Rational&, const Rational&);

Rational holder_exponent_bound(int d, const Rational& t1, const Rational& t2) {
    if (d < 2) throw DomainError("d must be at least 2");
    const Rational critical(d, d - 1);
    if (!(t1 > 0 && t1 < t2 && t2 <= critical)) {
        throw DomainError("need 0 < t1 < t2 <= d/(d-1), got t1 = " + to_string(t1) + ", t2 = " + to_string(t2));
    }
    return (Rational(d - 1) * t2 + t1) / (Rational(d) * t2);
}

DimensionReport dimension_report(const SetSpec& spec, int grid_points) {
    if (grid_points < 2) throw DomainError("theta grid needs at least 2 points");
    DimensionReport report{spec, hausdorff_dim(spec), box_dim_formula(spec), assouad_dim_formula(spec), {}, !spec.subcritical()};
    for (int i = 0; i < grid_points; ++i) {
        const Rational theta(i, grid_points - 1);
        report.theta_profile.emplace_back(theta, intermediate_dim_formula(spec, theta));
    }
    return report;
}

nlohmann::json to_json(const DimensionReport& report) {
    nlohmann::json j;
    j["t"] = to_string(report.spec.t.value());
    j["d"] = report.spec.d;
    j["variant"] = to_string(report.spec.variant);
    j["hausdorff"] = to_string(report.hausdorff);
    j["box"] = to_string(report.box);
    j["assouad"] = to_string(report.assouad);
    j["profile"] = nlohmann::json::array();
    j["profile_decimal"] = nlohmann::json::array();
    for (const auto& [theta, dim] : report.theta_profile) {
        j["profile"].push_back({to_string(theta), to_string(dim)});
        j["profile_decimal"].push_back({to_double(theta), to_double(dim)});
    }
    j["decimal"] = {{"hausdorff", to_double(report.hausdorff)},
                    {"box", to_double(report.box)},
                    {"assouad", to_double(report.assouad)}};
    j["phase_transition"] = to_string(phase_transition(report.spec));
    j["collapsed"] = report.collapsed;
    return j;
}

BoxFit fit_box_dimension(std::span<const std::pair<int, std::uint64_t>> counts) {
    if (counts.size() < 3) throw DomainError("box dimension fit needs at least 3 scales");
    for (std::size_t i = 1; i < counts.size(); ++i) {
        if (counts[i].first <= counts[i - 1].first) throw DomainError("scales must be strictly increasing in j");
    }
    for (const auto& c : counts) {
        if (c.second == 0) throw DomainError("covering counts must be positive");
    }
    const double n = static_cast<double>(counts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [j, count] : counts) {
        const double x = j;
        const double y = std::log2(static_cast<double>(count));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    BoxFit fit;
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (const auto& [j, count] : counts) {
        const double r = std::log2(static_cast<double>(count)) - (fit.intercept + fit.slope * j);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    const auto& a = counts[counts.size() - 2];
    const auto& b = counts.back();
    fit.last_pair_slope = (std::log2(static_cast<double>(b.second)) - std::log2(static_cast<double>(a.second))) / (b.first - a.first);
    return fit;
}

double TwoScaleCover::cost(double s) const {
    return static_cast<double>(coarse_cells) * std::exp2(-level * s) + static_cast<double>(fine_cells) * std::exp2(-fine_level * s);
}

TwoScaleCover build_two_scale_cover(const SetSpec& spec, const Rational& theta, DyadicScale scale, std::uint64_t max_points) {
    if (!spec.subcritical()) throw DomainError("the two-scale cover assumes t < d/(d-1)");
    if (theta <= phase_transition(spec) || theta > 1) {
        throw DomainError("theta must lie in ((d-1)t/d, 1] = (" + to_string(phase_transition(spec)) + ", 1], got " + to_string(theta));
    }
    const Rational d = spec.d;
    const Rational t = spec.t.value();
    const int j = scale.level();

    TwoScaleCover cover;
    cover.theta = theta;
    cover.level = j;
    cover.split_height_exponent = d * t / (d * theta + t);
    // nearest dyadic split height, kept between delta and 1
    const BigInt split = floor(Rational(j) * cover.split_height_exponent + Rational(1, 2));
    cover.split_level = std::clamp(split.convert_to<int>(), 0, j);
    cover.fine_level = floor(Rational(j) / theta).convert_to<int>();
    if (cover.fine_level > 62) throw DomainError("fine scale 2^-" + std::to_string(cover.fine_level) + " is too small");

    const std::uint64_t q_max = cover_q_max(spec, scale);
    check_point_budget(spec, 2, q_max, max_points);
    // coarse part: heights strictly below 2^-split_level, so no delta-row is shared with the fine part
    std::uint64_t q_split = ceil_inverse_height(spec.t, cover.split_level);
    if (ipow(BigInt(q_split), spec.t.num) == BigInt(1) << (cover.split_level * spec.t.den)) ++q_split;
    q_split = std::max<std::uint64_t>(2, q_split);

    const std::uint64_t base = std::uint64_t{1} << (static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(spec.d - 1));
    cover.coarse_cells = base + kernels::occupied_cells(spec, j, q_split, q_max);
    cover.fine_cells = q_split > 2 ? kernels::occupied_cells(spec, cover.fine_level, 2, q_split - 1) : 0;
    return cover;
}

CoverCost two_scale_cover_cost(const SetSpec& spec, const Rational& theta, DyadicScale scale, double s, std::uint64_t max_points) {
    const TwoScaleCover cover = build_two_scale_cover(spec, theta, scale, max_points);
    return CoverCost{theta, scale, s, cover.cost(s), cover.split_height_exponent, cover.split_level, cover.fine_level};
}

double critical_exponent(const TwoScaleCover& cover, int d, double tolerance) {
    double lo = 0;
    double hi = d;
    const double at_lo = cover.cost(lo);
    const double at_hi = cover.cost(hi);
    if (!(at_lo >= 1 && at_hi <= 1)) {
        throw VerificationError("cost(s) = 1 is not bracketed by [0, " + std::to_string(d) + "]: cost(0) = " +
                                std::to_string(at_lo) + ", cost(d) = " + std::to_string(at_hi));
    }
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (cover.cost(mid) > 1) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double critical_exponent(const SetSpec& spec, const Rational& theta, DyadicScale scale, std::uint64_t max_points) {
    return critical_exponent(build_two_scale_cover(spec, theta, scale, max_points), spec.d);
}

AssouadEstimate estimate_assouad(const SetSpec& spec, const AssouadProbeConfig& config, std::uint64_t max_points) {
    if (config.probes < 1) throw DomainError("need at least one probe");
    if (config.corner_q_max < 2) throw DomainError("corner sampling needs q_max >= 2");
    std::mt19937_64 rng(config.seed);
    // modulo draws keep the stream identical across standard libraries
    auto draw = [&](std::uint64_t n) { return rng() % n; };

    AssouadEstimate out;
    for (int i = 0; i < config.probes; ++i) {
        RationalPoint point;
        bool origin = i == 0;
        if (!origin) {
            point.denominator = 2 + draw(config.corner_q_max - 1);
            std::vector<std::uint64_t> residues;
            if (spec.variant == Variant::graph) {
                residues = coprime_residues(point.denominator);
            } else {
                for (std::uint64_t m = 1; m < point.denominator; ++m) residues.push_back(m);
            }
            for (int a = 0; a < spec.d - 1; ++a) point.numerators.push_back(residues[draw(residues.size())]);
        }
        const int R_level = static_cast<int>(draw(static_cast<std::uint64_t>(config.max_R_level) + 1));
        for (int m : config.ratio_levels) {
            AssouadProbe probe;
            probe.R_level = R_level;
            probe.r_level = R_level + m;
            const BigInt scale = BigInt(1) << probe.r_level;
            if (origin) {
                probe.corner.assign(static_cast<std::size_t>(spec.d), Rational(0));
            } else {
                for (auto p : point.numerators) {
                    probe.corner.emplace_back(BigInt(axis_index(p, point.denominator, probe.r_level)), scale);
                }
                probe.corner.emplace_back(BigInt(height_index(spec.t, point.denominator, probe.r_level)), scale);
            }
            probe.count = localized_cover_count(spec, probe.corner, probe.R_level, probe.r_level, max_points).total;
            probe.exponent = std::log(static_cast<double>(probe.count)) / (m * std::log(2.0));
            out.max_exponent = std::max(out.max_exponent, probe.exponent);
            out.probes.push_back(std::move(probe));
        }
    }
    return out;
}

} // namespace popcorn
