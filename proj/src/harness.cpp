#include "simfix/harness.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "simfix/scene.hpp"

namespace simfix {

using json = nlohmann::ordered_json;

void GenConfig::validate() const {
    const auto fail = [](const char* why) { throw GeometryError(ErrorCode::InvalidConfig, why); };
    if (!(scale_lo > 0.0)) fail("scale_lo must be positive");
    if (!(scale_lo < scale_hi) || !std::isfinite(scale_hi)) fail("scale_lo must be below scale_hi");
    if (!(isometry_band >= 0.0)) fail("isometry_band must be non-negative");
    if (!(isometry_band < std::min(std::abs(1.0 - scale_lo), std::abs(scale_hi - 1.0)))) {
        fail("isometry_band must be narrower than the distance from 1 to either scale bound");
    }
    if (!(translation_range >= 0.0) || !std::isfinite(translation_range)) {
        fail("translation_range must be finite and non-negative");
    }
    if (!(kind_mix >= 0.0 && kind_mix <= 1.0)) fail("kind_mix must lie in [0, 1]");
    if (!(dilation_mix >= 0.0 && dilation_mix <= 1.0)) fail("dilation_mix must lie in [0, 1]");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

CaseRng::CaseRng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream)
    : engine_(splitmix64(seed ^ splitmix64(index ^ splitmix64(stream)))) {}

double CaseRng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double CaseRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

Similarity gen_similarity(const GenConfig& config, std::size_t index) {
    CaseRng rng(config.seed, index, 0);
    const bool indirect = rng.chance(config.kind_mix);
    const double log_lo = std::log(config.scale_lo);
    const double log_hi = std::log(config.scale_hi);
    double scale = 1.0;
    do {
        scale = std::exp(rng.uniform(log_lo, log_hi));
    } while (std::abs(scale - 1.0) <= config.isometry_band);

    double angle = 0.0;
    if (!indirect && rng.chance(config.dilation_mix)) {
        angle = rng.chance(0.5) ? 0.0 : 180.0;
    } else {
        angle = rng.uniform(0.0, 360.0);
    }
    const double t = config.translation_range;
    const Point shift{rng.uniform(-t, t), rng.uniform(-t, t)};
    return Similarity(indirect ? Kind::Indirect : Kind::Direct, scale, angle, shift);
}

std::size_t histogram_bin(double rel_error) {
    if (rel_error == 0.0) return 0;
    if (!(rel_error <= kAgreementTol)) return kHistogramBins - 1;
    if (rel_error < 1e-16) return 1;
    const int decade = static_cast<int>(std::floor(std::log10(rel_error)));  // -16 .. -9
    return static_cast<std::size_t>(std::clamp(decade + 18, 2, 9));
}

std::string histogram_label(std::size_t bin) {
    static const std::array<std::string, kHistogramBins> labels{
        "0",           "<1e-16",      "1e-16..1e-15", "1e-15..1e-14", "1e-14..1e-13", "1e-13..1e-12",
        "1e-12..1e-11", "1e-11..1e-10", "1e-10..1e-9",  "1e-9..1e-8",   ">1e-8"};
    return labels.at(bin);
}

namespace {

double rel_error(Point got, Point want) { return distance(got, want) / (1.0 + norm(want)); }

void record(Report& report, std::size_t index, const std::string& check, bool ok,
            const std::string& detail = {}) {
    CheckTally& tally = report.checks[check];
    if (ok) {
        ++tally.passed;
        return;
    }
    ++tally.failed;
    if (report.failures.size() < kMaxListedFailures) {
        report.failures.push_back({index, check, detail});
    }
}

// Lexicographic (failed, rel_error); the first index wins ties.
bool worse_than(const WorstCase& candidate, const std::optional<WorstCase>& current) {
    if (!current) return true;
    if (candidate.failed != current->failed) return candidate.failed;
    return candidate.rel_error > current->rel_error;
}

// |alpha(C) - C| relative to |C|.
double self_residual(const Similarity& alpha, const FixedPointResult& r) {
    return distance(alpha(r.point), r.point) / (1.0 + norm(r.point));
}

}  // namespace

FixedPointResult theorem_for_harness(const Similarity& alpha, const Tolerances& tol) {
    FixedPointResult best = fixed_point_via_theorem(alpha, 0, tol);
    for (int first = 1; first < 3 && best.conditioning < kShallowSine; ++first) {
        try {
            FixedPointResult next = fixed_point_via_theorem(alpha, first, tol);
            if (self_residual(alpha, next) < self_residual(alpha, best)) best = std::move(next);
        } catch (const GeometryError&) {
        }
    }
    return best;
}

Report run_equivalence(const GenConfig& config, const Tolerances& tol) {
    config.validate();
    Report report;
    report.suite = "equivalence";
    for (const char* method : {"algorithm1", "dilation", "theorem"}) {
        report.histograms[method] = Histogram{};
    }

    for (std::size_t i = 0; i < config.cases; ++i) {
        const Similarity alpha = gen_similarity(config, i);
        const bool dilatation = is_dilatation(alpha);
        bool case_ok = true;
        WorstCase wc;
        wc.index = i;
        wc.alpha = alpha;

        std::optional<Point> oracle;
        try {
            oracle = fixed_point_algebraic(alpha, tol).point;
            wc.oracle = oracle;
        } catch (const GeometryError& e) {
            record(report, i, "oracle", false, e.what());
            case_ok = false;
        }

        std::optional<FixedPointResult> built;
        try {
            built = fixed_point(alpha, tol);
        } catch (const GeometryError& e) {
            record(report, i, "oracle_equivalence", false, e.what());
            case_ok = false;
        }

        if (built) {
            const std::string method(to_string(built->method));
            ++report.methods[method];
            wc.method = method;
            wc.constructed = built->point;
            if (built->trace) wc.trace = *built->trace;

            const bool fixed = distance(alpha(built->point), built->point) <=
                               tol.eps_point * (1.0 + norm(built->point));
            const bool conditioned = built->conditioning > kNearParallelSine;
            const bool incident = built->trace && verify_incidence(*built->trace, tol);
            record(report, i, "fixed_point_property", fixed);
            record(report, i, "conditioning", conditioned,
                   "conditioning " + format_number(built->conditioning));
            record(report, i, "trace_incidence", incident);
            case_ok = case_ok && fixed && conditioned && incident;
        }

        if (built && oracle) {
            const double abs_err = distance(built->point, *oracle);
            const double rel = rel_error(built->point, *oracle);
            wc.abs_error = abs_err;
            wc.rel_error = rel;
            report.max_abs_error = std::max(report.max_abs_error, abs_err);
            report.max_rel_error = std::max(report.max_rel_error, rel);
            ++report.histograms[wc.method][histogram_bin(rel)];
            const bool ok = rel <= kAgreementTol;
            record(report, i, "oracle_equivalence", ok, "relative error " + format_number(rel));
            case_ok = case_ok && ok;
        }

        if (!dilatation) {
            try {
                const FixedPointResult via = theorem_for_harness(alpha, tol);
                ++report.proof_cases[static_cast<std::size_t>(via.proof_case)];
                bool agree = false;
                std::string detail;
                if (built && oracle) {
                    const double rel_theorem = rel_error(via.point, *oracle);
                    const double rel_pair = rel_error(via.point, built->point);
                    ++report.histograms["theorem"][histogram_bin(rel_theorem)];
                    agree = rel_theorem <= kAgreementTol && rel_pair <= kAgreementTol;
                    detail = "theorem relative error " + format_number(rel_theorem) +
                             ", pairwise " + format_number(rel_pair);
                }
                record(report, i, "three_method_agreement", agree, detail);
                case_ok = case_ok && agree;
            } catch (const GeometryError& e) {
                record(report, i, "three_method_agreement", false, e.what());
                case_ok = false;
            }
        }

        ++report.total;
        if (case_ok) {
            ++report.passed;
        } else {
            ++report.failed;
        }
        wc.failed = !case_ok;
        if (worse_than(wc, report.worst_case)) {
            report.worst_case = std::move(wc);
        }
    }
    return report;
}

namespace {

using PointMap = std::function<Point(Point)>;

struct InvariantContext {
    const GenConfig& config;
    const Tolerances& tol;
    Report& report;
    CaseRng rng;
    std::size_t index;

    Point random_point() {
        const double t = std::max(1.0, config.translation_range);
        return {rng.uniform(-t, t), rng.uniform(-t, t)};
    }

    Point random_direction() {
        const auto [s, c] = sincos_deg(rng.uniform(0.0, 360.0));
        return {c, s};
    }

    Similarity random_similarity() {
        const Kind kind = rng.chance(0.5) ? Kind::Indirect : Kind::Direct;
        return Similarity(kind, std::exp(rng.uniform(std::log(0.5), std::log(2.0))),
                          rng.uniform(0.0, 360.0), random_point());
    }

    void check(const std::string& name, bool ok, const std::string& detail = {}) {
        ++report.total;
        if (ok) {
            ++report.passed;
        } else {
            ++report.failed;
        }
        record(report, index, name, ok, detail);
    }
};

bool close_rel(Point a, Point b, double eps, double scale = 0.0) {
    return distance(a, b) <= eps * (1.0 + std::max({norm(a), norm(b), scale}));
}

void check_ratio_law(InvariantContext& ctx, const PointMap& map, double claimed) {
    Point p = ctx.random_point();
    Point q = ctx.random_point();
    while (distance(p, q) < 1e-3) q = ctx.random_point();
    const double d = distance(p, q);
    const double d_image = distance(map(p), map(q));
    const double err = std::abs(d_image - claimed * d) / (claimed * d);
    ctx.check("ratio_law", err <= 1e-9, "relative deviation " + format_number(err));
}

void check_betweenness(InvariantContext& ctx, const PointMap& map) {
    Point p = ctx.random_point();
    Point q = ctx.random_point();
    while (distance(p, q) < 1e-3) q = ctx.random_point();
    const Point c = p + ctx.rng.uniform(0.1, 0.9) * (q - p);
    bool ok = is_between(p, c, q, ctx.tol) && is_between(map(p), map(c), map(q), ctx.tol);
    ctx.check("betweenness", ok);
}

void check_collineation(InvariantContext& ctx, const PointMap& map) {
    const Line l = Line::through_direction(ctx.random_point(), ctx.random_direction());
    const double reach = std::max(1.0, ctx.config.translation_range);
    const Point p0 = l.anchor();
    const Line image = line_through(map(p0), map(p0 + reach * l.direction()), ctx.tol);
    bool ok = true;
    for (int k = 0; k < 3; ++k) {
        const Point on = p0 + ctx.rng.uniform(-reach, reach) * l.direction();
        const Point moved = map(on);
        ok = ok && image.residual(moved) <= 1e-9 * (1.0 + norm(moved));
    }
    ctx.check("collineation", ok);
}

void check_dilatation(InvariantContext& ctx, const Similarity& alpha) {
    bool all_parallel = true;
    for (int k = 0; k < 20; ++k) {
        const Line l = Line::through_direction(ctx.random_point(), ctx.random_direction());
        all_parallel = all_parallel && is_parallel(l, apply_line(alpha, l), ctx.tol);
    }
    ctx.check("dilatation_characterization", all_parallel == is_dilatation(alpha));
}

void check_group_laws(InvariantContext& ctx, const Similarity& alpha) {
    const Similarity beta = ctx.random_similarity();
    const Similarity gamma = ctx.random_similarity();
    const Similarity left = compose(compose(alpha, beta), gamma);
    const Similarity right = compose(alpha, compose(beta, gamma));
    bool assoc = left.kind() == right.kind();
    for (int k = 0; k < 10; ++k) {
        const Point x = ctx.random_point();
        assoc = assoc && close_rel(left(x), right(x), 1e-9) &&
                close_rel(left(x), alpha(beta(gamma(x))), 1e-9);
    }
    ctx.check("group_associativity", assoc);

    const SimilarityClass unit = classify(compose(alpha, inverse(alpha)), ctx.tol);
    ctx.check("group_inverse", std::holds_alternative<Identity>(unit.value),
              std::string(tag(unit)));
}

void check_commutation(InvariantContext& ctx, const Similarity& alpha, Point center) {
    const double s = std::exp(ctx.rng.uniform(std::log(0.2), std::log(5.0)));
    const Similarity xi = stretch(center, s);
    const Similarity phi = halfturn(center);
    bool xi_ok = true;
    bool phi_ok = true;
    for (int k = 0; k < 10; ++k) {
        const Point x = ctx.random_point();
        xi_ok = xi_ok && close_rel(xi(alpha(x)), alpha(xi(x)), 1e-9, norm(center));
        phi_ok = phi_ok && close_rel(phi(alpha(x)), alpha(phi(x)), 1e-9, norm(center));
    }
    ctx.check("commutation_stretch", xi_ok);
    ctx.check("commutation_halfturn", phi_ok);
}

void check_axis(InvariantContext& ctx, const Similarity& alpha, Point center) {
    Point probe = ctx.random_point();
    while (distance(probe, center) < 1e-3) probe = ctx.random_point();
    bool ok = false;
    std::string detail;
    try {
        const Line axis = reflection_axis(alpha, center, probe, ctx.tol);
        const Similarity rebuilt = compose(reflection(axis), stretch(center, alpha.scale()));
        ok = true;
        for (int k = 0; k < 10; ++k) {
            const Point x = ctx.random_point();
            ok = ok && close_rel(rebuilt(x), alpha(x), 1e-9, norm(center));
        }
        const auto& cls = std::get<StretchReflection>(classify(alpha, ctx.tol).value);
        ok = ok && approx_equal(cls.axis, axis, 1e-7);
    } catch (const GeometryError& e) {
        detail = e.what();
    }
    ctx.check("axis_recomposition", ok, detail);
}

void check_center_collinearity(InvariantContext& ctx, const Similarity& alpha, Point center) {
    const double reach = 1.0 + norm(center);
    // Every line meets its image at the rotation angle under a direct map.
    const double min_sine =
        alpha.is_direct() ? std::min(1e-2, 0.5 * std::abs(sincos_deg(alpha.angle()).sin)) : 1e-2;
    bool ok = false;
    std::string detail = "no admissible line";
    for (int attempt = 0; attempt < 10; ++attempt) {
        const Point through = center + ctx.rng.uniform(0.5, 2.0) * reach * ctx.random_direction();
        const Line l = Line::through_direction(through, ctx.random_direction());
        if (l.residual(center) < 1e-3 * reach ||
            intersection_sine(l, apply_line(alpha, l)) < min_sine) {
            continue;
        }
        try {
            const CollinearityWitness w = collinearity_witness(alpha, center, l, std::nullopt, ctx.tol);
            ok = w.ok;
            const double span = diameter(Triangle{center, w.d, w.e});
            detail = "relative area " +
                     format_number(std::abs(signed_area(Triangle{center, w.d, w.e})) / (span * span));
        } catch (const GeometryError& e) {
            detail = e.what();
        }
        break;
    }
    ctx.check("center_collinearity", ok, detail);
}

void check_rotation_angle(InvariantContext& ctx, const Similarity& alpha, Point center) {
    Point probe = ctx.random_point();
    while (distance(probe, center) < 1e-3) probe = ctx.random_point();
    const double measured = rotation_angle_at(alpha, center, probe, ctx.tol);
    const double err = angular_distance_deg(measured, alpha.angle());
    ctx.check("rotation_angle", err <= kAngleEpsDeg, "deviation " + format_number(err));
}

}  // namespace

Report run_invariants(const GenConfig& config, const Tolerances& tol,
                      const std::optional<FaultInjection>& fault) {
    config.validate();
    Report report;
    report.suite = "invariants";

    for (std::size_t i = 0; i < config.cases; ++i) {
        const Similarity alpha = gen_similarity(config, i);
        InvariantContext ctx{config, tol, report, CaseRng(config.seed, i, 1), i};

        PointMap map = [&alpha](Point p) { return alpha(p); };
        if (fault && fault->case_index == i) {
            map = fault->map;
        }
        check_ratio_law(ctx, map, ratio(alpha));
        check_betweenness(ctx, map);
        check_collineation(ctx, map);
        check_dilatation(ctx, alpha);
        check_group_laws(ctx, alpha);

        const SimilarityClass cls = classify(alpha, tol);
        const SimilarityClass again = classify(to_similarity(cls), tol);
        ctx.check("classification_round_trip",
                  approx_equal(cls, again, 1e-9) && approx_equal(to_similarity(cls), alpha, 1e-9),
                  std::string(tag(cls)) + " vs " + std::string(tag(again)));

        const Point center = fixed_point_algebraic(alpha, tol).point;
        ctx.check("oracle_soundness",
                  distance(alpha(center), center) <= tol.eps_point * (1.0 + norm(center)));
        check_commutation(ctx, alpha, center);

        try {
            const FixedPointResult built = fixed_point(alpha, tol);
            ctx.check("trace_incidence", built.trace && verify_incidence(*built.trace, tol));
        } catch (const GeometryError& e) {
            ctx.check("trace_incidence", false, e.what());
        }

        if (alpha.is_direct()) {
            check_rotation_angle(ctx, alpha, center);
        } else {
            check_axis(ctx, alpha, center);
        }
        if (!is_dilatation(alpha)) {
            check_center_collinearity(ctx, alpha, center);
        }
    }
    return report;
}

namespace {

json point_json(Point p) { return json::array({p.x, p.y}); }

json line_json(const Line& l) { return json::array({l.a(), l.b(), l.c()}); }

json trace_json(const ConstructionTrace& trace) {
    json out = json::array();
    for (const TraceEntry& e : trace) {
        json item;
        item["label"] = e.label;
        item["step"] = e.step;
        if (e.is_point()) {
            item["point"] = point_json(e.point());
        } else {
            item["line"] = line_json(e.line());
        }
        out.push_back(std::move(item));
    }
    return out;
}

json similarity_json(const Similarity& s) {
    json out;
    out["kind"] = std::string(to_string(s.kind()));
    out["scale"] = s.scale();
    out["angle_deg"] = s.angle();
    out["translation"] = point_json(s.translation());
    return out;
}

json report_json(const Report& r) {
    json out;
    out["suite"] = r.suite;
    out["total"] = r.total;
    out["passed"] = r.passed;
    out["failed"] = r.failed;
    out["max_abs_error"] = r.max_abs_error;
    out["max_rel_error"] = r.max_rel_error;

    json checks = json::object();
    for (const auto& [name, tally] : r.checks) {
        checks[name] = {{"passed", tally.passed}, {"failed", tally.failed}};
    }
    out["checks"] = std::move(checks);

    if (!r.methods.empty()) {
        json methods = json::object();
        for (const auto& [name, count] : r.methods) methods[name] = count;
        out["methods"] = std::move(methods);
    }
    if (!r.histograms.empty()) {
        json hist = json::object();
        for (const auto& [name, bins] : r.histograms) {
            json h = json::object();
            for (std::size_t b = 0; b < kHistogramBins; ++b) h[histogram_label(b)] = bins[b];
            hist[name] = std::move(h);
        }
        out["histograms"] = std::move(hist);
        out["proof_cases"] = {{"early_fixed_point", r.proof_cases[0]},
                              {"case1_A_P_B", r.proof_cases[1]},
                              {"case2_A_B_P", r.proof_cases[2]},
                              {"case3_P_A_B", r.proof_cases[3]}};
    }

    json failures = json::array();
    for (const Failure& f : r.failures) {
        failures.push_back({{"index", f.index}, {"check", f.check}, {"detail", f.detail}});
    }
    out["failures"] = std::move(failures);

    if (r.worst_case) {
        const WorstCase& w = *r.worst_case;
        json wc;
        wc["index"] = w.index;
        wc["failed"] = w.failed;
        wc["similarity"] = similarity_json(w.alpha);
        wc["oracle"] = w.oracle ? point_json(*w.oracle) : json(nullptr);
        wc["constructed"] = w.constructed ? point_json(*w.constructed) : json(nullptr);
        wc["method"] = w.method;
        wc["abs_error"] = w.abs_error;
        wc["rel_error"] = w.rel_error;
        wc["trace"] = trace_json(w.trace);
        out["worst_case"] = std::move(wc);
    } else {
        out["worst_case"] = nullptr;
    }
    return out;
}

}  // namespace

std::string to_json_text(const Report& report) { return report_json(report).dump(2) + "\n"; }

std::string fuzz_report_json(const GenConfig& config, const Report& equivalence,
                             const Report& invariants) {
    json out;
    out["config"] = {{"seed", config.seed},
                     {"cases", config.cases},
                     {"scale_range", {config.scale_lo, config.scale_hi}},
                     {"isometry_band", config.isometry_band},
                     {"translation_range", config.translation_range},
                     {"kind_mix", config.kind_mix},
                     {"dilation_mix", config.dilation_mix},
                     {"rng", "mt19937_64/splitmix64"}};
    out["equivalence"] = report_json(equivalence);
    out["invariants"] = report_json(invariants);
    out["ok"] = equivalence.failed == 0 && invariants.failed == 0;
    return out.dump(2) + "\n";
}

}  // namespace simfix
