#include "popcorn/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "popcorn/covering.hpp"
#include "popcorn/dimensions.hpp"
#include "popcorn/errors.hpp"
#include "popcorn/measure.hpp"
#include "popcorn/suites.hpp"

namespace popcorn::cli {

namespace {

using nlohmann::json;

std::string dec(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

SetSpec spec_of(const RunConfig& c) { return SetSpec::make(parse_rational(c.t), c.d, parse_variant(c.variant)); }

Rational required(const std::optional<std::string>& value, const char* flag) {
    if (!value) throw DomainError(std::string("--") + flag + " is required here");
    return parse_rational(*value);
}

std::string format_of(const RunConfig& c, const char* fallback) { return c.format.value_or(fallback); }

void json_only(const RunConfig& c, const char* command) {
    if (format_of(c, "json") != "json") throw DomainError(std::string(command) + " writes json only");
}

std::pair<int, int> levels(const RunConfig& c, int lo, int hi) {
    const int a = c.j_min.value_or(lo);
    const int b = c.j_max.value_or(std::max(hi, a));
    if (a < 1 || b < a) throw DomainError("need 1 <= --j-min <= --j-max");
    return {a, b};
}

int single_level(const RunConfig& c, int fallback) { return c.j_max.value_or(c.j_min.value_or(fallback)); }

Rational epsilon_of(const RunConfig& c) { return c.epsilon ? parse_rational(*c.epsilon) : Rational(1, 100); }

void dump(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

int cmd_formula(const RunConfig& c, std::ostream& os) {
    const DimensionReport report = dimension_report(spec_of(c), 101);
    const std::string fmt = format_of(c, "json");
    if (fmt == "json") {
        dump(os, to_json(report));
    } else {
        os << "theta,theta_decimal,dim,dim_decimal\n";
        for (const auto& [theta, dim] : report.theta_profile) {
            os << to_string(theta) << ',' << dec(to_double(theta)) << ',' << to_string(dim) << ',' << dec(to_double(dim)) << '\n';
        }
    }
    return ok;
}

int cmd_count(const RunConfig& c, std::ostream& os) {
    const SetSpec spec = spec_of(c);
    const auto [lo, hi] = levels(c, 1, 10);
    std::vector<CoverReport> rows;
    for (int j = lo; j <= hi; ++j) rows.push_back(cover_count(spec, DyadicScale(j), c.max_points));
    if (format_of(c, "csv") == "csv") {
        write_cover_csv_header(os);
        for (const auto& r : rows) write_cover_csv_row(os, r);
    } else {
        json arr = json::array();
        for (const auto& r : rows) {
            arr.push_back({{"j", r.scale.level()},
                           {"delta", dyadic_decimal(r.scale.level())},
                           {"total", r.total},
                           {"base_cells", r.base_cells},
                           {"popcorn_cells", r.popcorn_cells}});
        }
        dump(os, arr);
    }
    return ok;
}

int cmd_estimate(const RunConfig& c, std::ostream& os) {
    json_only(c, "estimate");
    const SetSpec spec = spec_of(c);
    json j;
    j["target"] = c.target;
    j["t"] = to_string(spec.t.value());
    j["d"] = spec.d;
    j["variant"] = to_string(spec.variant);
    Rational formula;
    double estimate = 0;
    if (c.target == "box") {
        const auto [lo, hi] = levels(c, 8, 14);
        if (hi - lo + 1 < 3) throw ResourceError("j range too short for a slope fit", "3 scales");
        std::vector<std::pair<int, std::uint64_t>> counts;
        json scales = json::array();
        for (int level = lo; level <= hi; ++level) {
            const CoverReport r = cover_count(spec, DyadicScale(level), c.max_points);
            counts.emplace_back(level, r.total);
            scales.push_back({{"j", level}, {"total", r.total}});
        }
        const BoxFit fit = fit_box_dimension(counts);
        estimate = fit.slope;
        formula = box_dim_formula(spec);
        j["last_pair_slope"] = fit.last_pair_slope;
        j["residual_rms"] = fit.residual_rms;
        j["scales"] = scales;
    } else if (c.target == "intermediate") {
        const Rational theta = required(c.theta, "theta");
        const int level = single_level(c, 14);
        const TwoScaleCover cover = build_two_scale_cover(spec, theta, DyadicScale(level), c.max_points);
        estimate = critical_exponent(cover, spec.d);
        formula = intermediate_dim_formula(spec, theta);
        j["theta"] = to_string(theta);
        j["j"] = level;
        j["split_height_exponent"] = to_string(cover.split_height_exponent);
        j["split_level"] = cover.split_level;
        j["fine_level"] = cover.fine_level;
        j["coarse_cells"] = cover.coarse_cells;
        j["fine_cells"] = cover.fine_cells;
    } else {
        AssouadProbeConfig config;
        config.seed = c.seed;
        const AssouadEstimate est = estimate_assouad(spec, config, c.max_points);
        estimate = est.max_exponent;
        formula = assouad_dim_formula(spec);
        const AssouadProbe* worst = &est.probes.front();
        for (const auto& p : est.probes) {
            if (p.exponent > worst->exponent) worst = &p;
        }
        json corner = json::array();
        for (const auto& x : worst->corner) corner.push_back(to_string(x));
        j["seed"] = c.seed;
        j["probes"] = est.probes.size();
        j["worst_probe"] = {{"corner", corner},
                            {"R_level", worst->R_level},
                            {"r_level", worst->r_level},
                            {"count", worst->count}};
    }
    j["estimate"] = estimate;
    j["formula_value"] = to_string(formula);
    j["formula_decimal"] = to_double(formula);
    j["gap"] = estimate - to_double(formula);
    dump(os, j);
    return ok;
}

// singles and pairs as numbers or "p/q" strings; every entry is taken as an exact rational
Rational entry(const json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number()) return Rational(v.get<double>());
    throw DomainError("matrix entries must be numbers or rational strings");
}

int verify_matrix(const RunConfig& c, std::ostream& os) {
    std::ifstream in(c.input);
    if (!in) throw DomainError("cannot read " + c.input);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("malformed JSON input: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("singles") || !doc.contains("pairs") || !doc["singles"].is_array() ||
        !doc["pairs"].is_array()) {
        throw DomainError("input must be an object with arrays \"singles\" and \"pairs\"");
    }
    std::vector<Rational> singles;
    for (const auto& v : doc["singles"]) singles.push_back(entry(v));
    std::vector<std::vector<Rational>> pairs;
    for (const auto& row : doc["pairs"]) {
        if (!row.is_array()) throw DomainError("\"pairs\" must be a matrix");
        auto& r = pairs.emplace_back();
        for (const auto& v : row) r.push_back(entry(v));
    }
    const Rational bound = chung_erdos_bound(singles, pairs);
    dump(os, {{"suite", "chung-erdos"}, {"passed", true}, {"bound", to_string(bound)}, {"bound_decimal", to_double(bound)}});
    return ok;
}

int cmd_verify(const RunConfig& c, std::ostream& os) {
    json_only(c, "verify");
    SuiteResult result;
    if (c.suite == "duffin-schaeffer") {
        DuffinSchaefferGrid grid;
        grid.seed = c.seed;
        grid.sample_d = std::max(c.d, 3);
        result = duffin_schaeffer_suite(grid);
    } else if (c.suite == "totient") {
        TotientGrid grid;
        grid.seed = c.seed;
        result = totient_suite(grid);
    } else if (c.suite == "chung-erdos") {
        if (!c.input.empty()) return verify_matrix(c, os);
        const auto [lo, hi] = levels(c, 8, 10);
        result = chung_erdos_layer_suite(spec_of(c), lo, hi, epsilon_of(c));
    } else if (c.suite == "epsilon") {
        const auto [lo, hi] = levels(c, 8, 12);
        result = epsilon_suite(spec_of(c), lo, hi, epsilon_of(c));
    } else {
        const auto [lo, hi] = levels(c, 8, 10);
        result = layer_comparability_suite(spec_of(c), lo, hi, epsilon_of(c));
    }
    dump(os, {{"suite", result.name},
              {"passed", result.passed()},
              {"checks", result.checks},
              {"failures", result.failures},
              {"counterexamples", result.counterexamples},
              {"notes", result.notes}});
    return result.passed() ? ok : counterexample;
}

int cmd_holder(const RunConfig& c, std::ostream& os) {
    const Rational t1 = required(c.t1, "t1");
    const Rational t2 = required(c.t2, "t2");
    const Rational bound = holder_exponent_bound(c.d, t1, t2);
    const SetSpec s1 = SetSpec::make(t1, c.d);
    const SetSpec s2 = SetSpec::make(t2, c.d);
    const Rational theta_star = phase_transition(s2);
    std::vector<std::pair<Rational, Rational>> curve;
    for (int i = 0; i <= 100; ++i) {
        const Rational theta(i, 100);
        curve.emplace_back(theta, intermediate_dim_formula(s2, theta) / intermediate_dim_formula(s1, theta));
    }
    if (format_of(c, "json") == "json") {
        json pts = json::array();
        for (const auto& [theta, ratio] : curve) pts.push_back({to_string(theta), to_string(ratio)});
        dump(os, {{"d", c.d},
                  {"t1", to_string(t1)},
                  {"t2", to_string(t2)},
                  {"alpha_bound", to_string(bound)},
                  {"alpha_bound_decimal", to_double(bound)},
                  {"theta_star", to_string(theta_star)},
                  {"theta_star_decimal", to_double(theta_star)},
                  {"curve", pts}});
    } else {
        os << "theta,theta_decimal,ratio,ratio_decimal\n";
        for (const auto& [theta, ratio] : curve) {
            os << to_string(theta) << ',' << dec(to_double(theta)) << ',' << to_string(ratio) << ',' << dec(to_double(ratio)) << '\n';
        }
    }
    return ok;
}

int cmd_layers(const RunConfig& c, std::ostream& os) {
    const SetSpec spec = spec_of(c);
    const DyadicScale scale(single_level(c, 10));
    const KRange range = admissible_k_range(spec, scale, epsilon_of(c));
    std::vector<LayerDiagnostics> rows;
    for (std::uint64_t k = range.k_min; k <= range.k_max; ++k) rows.push_back(layer_diagnostics(spec, scale, k));
    if (format_of(c, "csv") == "csv") {
        write_layer_csv_header(os);
        for (const auto& r : rows) write_layer_csv_row(os, r);
    } else {
        json arr = json::array();
        for (const auto& r : rows) {
            arr.push_back({{"k", r.k},
                           {"l_low", r.l_low},
                           {"l_high", r.l_high},
                           {"sum_measure", to_string(r.sum_measure)},
                           {"pair_sum", to_string(r.pair_sum)},
                           {"ce_floor", to_string(r.ce_floor)},
                           {"cover_count", r.cover_count}});
        }
        dump(os, arr);
    }
    return ok;
}

int cmd_points(const RunConfig& c, std::ostream& os) {
    const SetSpec spec = spec_of(c);
    const DyadicScale scale(single_level(c, 4));
    PointEnumerator points = enumerate_points(spec, cover_q_max(spec, scale), c.max_points);
    write_points(os, points);
    return ok;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Covering counts, dimension formulas and inequality checks for popcorn pyramid sets"};
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--t", c.t, "Exponent t as a/b")->capture_default_str();
    app.add_option("--d", c.d, "Ambient dimension")->capture_default_str();
    app.add_option("--variant", c.variant, "graph or full")->check(CLI::IsMember({"graph", "full"}))->capture_default_str();
    app.add_option("--j-min", c.j_min, "Finest-first scale range start (delta = 2^-j)");
    app.add_option("--j-max", c.j_max, "Scale range end; single-scale commands use this level");
    app.add_option("--theta", c.theta, "Intermediate parameter as a/b");
    app.add_option("--epsilon", c.epsilon, "Layer window exponent as a/b (default 1/100)");
    app.add_option("--t1", c.t1, "Smaller exponent for holder");
    app.add_option("--t2", c.t2, "Larger exponent for holder");
    app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", c.out, "Write results to this file instead of standard output");
    app.add_option("--seed", c.seed, "Seed for sampled probes and suites")->capture_default_str();
    app.add_option("--max-points", c.max_points, "Cap on enumerated points")->check(CLI::PositiveNumber)->capture_default_str();

    auto* formula = app.add_subcommand("formula", "Closed-form dimensions and the theta profile");
    auto* count = app.add_subcommand("count", "Dyadic cover counts per scale");
    auto* estimate = app.add_subcommand("estimate", "Empirical dimension estimate next to the closed form");
    estimate->add_option("--target", c.target, "box, intermediate or assouad")
        ->required()
        ->check(CLI::IsMember({"box", "intermediate", "assouad"}));
    auto* verify = app.add_subcommand("verify", "Run an inequality suite");
    verify->add_option("--suite", c.suite, "duffin-schaeffer, chung-erdos, totient, epsilon or layers")
        ->required()
        ->check(CLI::IsMember({"duffin-schaeffer", "chung-erdos", "totient", "epsilon", "layers"}));
    verify->add_option("--input", c.input, "JSON matrix {singles, pairs} for the chung-erdos suite");
    auto* holder = app.add_subcommand("holder", "Holder exponent bound between two exponents");
    auto* layers = app.add_subcommand("layers", "Layer diagnostics over the admissible k range");
    auto* points = app.add_subcommand("points", "Dump the rational points relevant at one scale");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    std::ostringstream buffer;
    try {
        int code = ok;
        if (*formula) code = cmd_formula(c, buffer);
        else if (*count) code = cmd_count(c, buffer);
        else if (*estimate) code = cmd_estimate(c, buffer);
        else if (*verify) code = cmd_verify(c, buffer);
        else if (*holder) code = cmd_holder(c, buffer);
        else if (*layers) code = cmd_layers(c, buffer);
        else if (*points) code = cmd_points(c, buffer);
        if (c.out.empty()) {
            out << buffer.str();
        } else {
            std::ofstream file(c.out, std::ios::binary);
            if (!file) {
                err << "error: cannot open " << c.out << '\n';
                return usage;
            }
            file << buffer.str();
        }
        return code;
    } catch (const ResourceError& e) {
        err << "resource cap: " << e.what() << '\n';
        return resource;
    } catch (const VerificationError& e) {
        err << "verification failed: " << e.what() << '\n';
        return counterexample;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }
}

} // namespace popcorn::cli
