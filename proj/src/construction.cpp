#include "simfix/construction.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace simfix {

namespace {

constexpr std::array<double, 3> kCandidateDirections{0.0, 45.0, 90.0};

Line candidate_line(int index, Point origin = {}) {
    const auto [s, c] = sincos_deg(kCandidateDirections[static_cast<std::size_t>(index)]);
    return Line::through_direction(origin, {c, s});
}

// First candidate line (from `first`) that meets its image.
std::optional<int> pick_candidate(const Similarity& alpha, int first, const Tolerances& tol,
                                  Point origin = {}) {
    for (int i = std::max(first, 0); i < static_cast<int>(kCandidateDirections.size()); ++i) {
        const Line q = candidate_line(i, origin);
        if (!is_parallel(q, apply_line(alpha, q), tol)) {
            return i;
        }
    }
    return std::nullopt;
}

void require_non_isometric(const Similarity& alpha, const Tolerances& tol) {
    if (is_isometry(alpha, tol)) {
        throw GeometryError(ErrorCode::IsometryInput, "the similarity is an isometry");
    }
}

void require_not_dilatation(const Similarity& alpha) {
    if (is_dilatation(alpha)) {
        throw GeometryError(ErrorCode::IsDilatation, "dilatations go through dilation_center");
    }
}

// Tracks the worst intersection sine seen during a construction.
class Builder {
public:
    Point cut(const Line& l1, const Line& l2, const Tolerances& tol) {
        const Intersection hit = intersect_checked(l1, l2, tol);
        conditioning_ = std::min(conditioning_, hit.sine);
        return hit.point;
    }

    void point(std::string label, Point p, int step, std::vector<std::string> on = {}) {
        trace_.push_back({std::move(label), p, step, std::move(on)});
    }

    void line(std::string label, const Line& l, int step, std::vector<std::string> through = {}) {
        trace_.push_back({std::move(label), l, step, std::move(through)});
    }

    FixedPointResult finish(Point c, FixedPointMethod method, int proof_case = 0) {
        FixedPointResult result;
        result.point = c;
        result.method = method;
        result.trace = std::move(trace_);
        result.conditioning = conditioning_;
        result.proof_case = proof_case;
        return result;
    }

private:
    ConstructionTrace trace_;
    double conditioning_ = std::numeric_limits<double>::infinity();
};

}  // namespace

WitnessTriangles make_witness(const Similarity& alpha, const Triangle& source,
                              const Tolerances& tol) {
    const Triangle image{alpha(source.p1), alpha(source.p2), alpha(source.p3)};
    const auto fail = [](const char* why) {
        throw GeometryError(ErrorCode::DegenerateSelection, why);
    };
    if (orientation(source.p1, source.p2, source.p3, tol) == 0 ||
        orientation(image.p1, image.p2, image.p3, tol) == 0) {
        fail("witness triangle is degenerate");
    }
    if (is_parallel(line_through(source.p1, source.p2, tol), line_through(image.p1, image.p2, tol),
                    tol)) {
        fail("PQ is parallel to P'Q'");
    }
    if (is_parallel(line_through(source.p2, source.p3, tol), line_through(image.p2, image.p3, tol),
                    tol)) {
        fail("QR is parallel to Q'R'");
    }
    return {source, image, -1};
}

WitnessTriangles witness_triangles(const Similarity& alpha, int first_candidate,
                                   const Tolerances& tol, Point origin) {
    require_non_isometric(alpha, tol);
    require_not_dilatation(alpha);
    const auto index = pick_candidate(alpha, first_candidate, tol, origin);
    if (!index) {
        throw GeometryError(ErrorCode::DegenerateSelection,
                            "no candidate line meets its image");
    }
    const Line q = candidate_line(*index, origin);
    const Line q_image = apply_line(alpha, q);
    const Point corner = intersect(q, q_image, tol);
    const Triangle source{corner + q.direction(), corner, corner + q_image.direction()};
    WitnessTriangles w = make_witness(alpha, source, tol);
    w.candidate = *index;
    return w;
}

FixedPointResult dilation_center(const Similarity& delta, Point probe_a,
                                 std::optional<Point> probe_b, const Tolerances& tol) {
    if (!is_dilatation(delta)) {
        throw GeometryError(ErrorCode::NotADilation, "linear part is not a multiple of ±I");
    }
    const bool unit_ratio = is_isometry(delta, tol);
    const bool turned = angular_distance_deg(delta.angle(), 180.0) <= kAngleEpsDeg;
    if (unit_ratio && !turned) {
        if (norm(delta.translation()) <= tol.eps_point) {
            throw GeometryError(ErrorCode::IdentityInput, "every point is fixed");
        }
        throw GeometryError(ErrorCode::NotADilation, "a translation has no center");
    }

    Builder b;
    const Point a = probe_a;
    const Point a_image = delta(a);
    b.point("A", a, 1);
    if (same_point(a, a_image, tol)) {
        b.point("C", a, 2);
        return b.finish(a, FixedPointMethod::DilationConstruction);
    }
    b.point("A'", a_image, 1);
    if (unit_ratio) {
        // Halfturn: the center is the midpoint of AA'.
        const Point c = midpoint(a, a_image);
        b.point("C", c, 2);
        FixedPointResult r = b.finish(c, FixedPointMethod::DilationConstruction);
        r.conditioning = 1.0;
        return r;
    }

    const Line aa = line_through(a, a_image, tol);
    b.line("AA'", aa, 2, {"A", "A'"});
    const Point probe = probe_b.value_or(a + aa.normal());
    if (contains(aa, probe, tol)) {
        throw GeometryError(ErrorCode::DegenerateProbe, "B must lie off line AA'");
    }
    const Point probe_image = delta(probe);
    b.point("B", probe, 3);
    if (same_point(probe, probe_image, tol)) {
        b.point("C", probe, 4);
        return b.finish(probe, FixedPointMethod::DilationConstruction);
    }
    b.point("B'", probe_image, 3);
    const Line bb = line_through(probe, probe_image, tol);
    b.line("BB'", bb, 4, {"B", "B'"});
    const Point c = b.cut(aa, bb, tol);
    b.point("C", c, 5, {"AA'", "BB'"});
    return b.finish(c, FixedPointMethod::DilationConstruction);
}

FixedPointResult fixed_point_algorithm1(const Similarity& alpha, const WitnessTriangles& w,
                                        const Tolerances& tol) {
    const auto& [p, q, r] = w.source;
    const auto& [pi, qi, ri] = w.image;

    Builder b;
    b.point("P", p, 0);
    b.point("Q", q, 0);
    b.point("R", r, 0);
    b.point("P'", pi, 0);
    b.point("Q'", qi, 0);
    b.point("R'", ri, 0);

    // Steps 1-4: m = PQ, n ∥ m through R, the primed lines likewise, then
    // a = DE with D = m ∩ m' and E = n ∩ n'.
    const Line m = line_through(p, q, tol);
    const Line n = parallel_through(m, r);
    b.line("m", m, 1, {"P", "Q"});
    b.line("n", n, 1, {"R"});
    const Line mi = line_through(pi, qi, tol);
    const Line ni = parallel_through(mi, ri);
    b.line("m'", mi, 2, {"P'", "Q'"});
    b.line("n'", ni, 2, {"R'"});
    const Point d = b.cut(m, mi, tol);
    const Point e = b.cut(n, ni, tol);
    b.point("D", d, 3, {"m", "m'"});
    b.point("E", e, 3, {"n", "n'"});
    const Line a = line_through(d, e, tol);
    b.line("a", a, 4, {"D", "E"});

    // Step 5: the same with P and R interchanged.
    const Line m2 = line_through(r, q, tol);
    const Line n2 = parallel_through(m2, p);
    const Line m2i = line_through(ri, qi, tol);
    const Line n2i = parallel_through(m2i, pi);
    b.line("m2", m2, 5, {"R", "Q"});
    b.line("n2", n2, 5, {"P"});
    b.line("m2'", m2i, 5, {"R'", "Q'"});
    b.line("n2'", n2i, 5, {"P'"});
    const Point f = b.cut(m2, m2i, tol);
    const Point g = b.cut(n2, n2i, tol);
    b.point("F", f, 5, {"m2", "m2'"});
    b.point("G", g, 5, {"n2", "n2'"});
    const Line bl = line_through(f, g, tol);
    b.line("b", bl, 5, {"F", "G"});

    // Step 6.
    const Point c = b.cut(a, bl, tol);
    b.point("C", c, 6, {"a", "b"});

    const double slack = 1e-8 * (1.0 + norm(c)) * std::max(1.0, alpha.scale());
    if (distance(alpha(c), c) > slack) {
        throw GeometryError(ErrorCode::ConstructionFailed, "a ∩ b is not fixed by the map");
    }
    return b.finish(c, FixedPointMethod::Algorithm1);
}

FixedPointResult fixed_point_via_theorem(const Similarity& alpha, int first_candidate,
                                         const Tolerances& tol) {
    require_non_isometric(alpha, tol);
    require_not_dilatation(alpha);
    const auto index = pick_candidate(alpha, first_candidate, tol);
    if (!index) {
        throw GeometryError(ErrorCode::DegenerateSelection, "no candidate line meets its image");
    }

    Builder b;
    const Line l = candidate_line(*index);
    const Line li = apply_line(alpha, l);
    b.line("l", l, 1);
    b.line("l'", li, 1);
    const Point a = b.cut(l, li, tol);
    const Point ai = alpha(a);
    b.point("A", a, 1, {"l", "l'"});
    if (same_point(a, ai, tol)) {
        b.point("C", a, 1, {"l", "l'"});
        return b.finish(a, FixedPointMethod::TheoremParallels);
    }
    b.point("A'", ai, 2, {"l'"});

    const Line m = parallel_through(l, ai);
    const Line mi = apply_line(alpha, m);
    b.line("m", m, 2, {"A'"});
    b.line("m'", mi, 2);
    const Point bp = b.cut(m, mi, tol);
    const Point bi = alpha(bp);
    b.point("B", bp, 3, {"m", "m'"});
    if (same_point(bp, bi, tol)) {
        b.point("C", bp, 3, {"m", "m'"});
        return b.finish(bp, FixedPointMethod::TheoremParallels);
    }
    b.point("B'", bi, 3, {"m'"});

    const Line ab = line_through(a, bp, tol);
    const Line abi = line_through(ai, bi, tol);
    b.line("AB", ab, 4, {"A", "B"});
    b.line("A'B'", abi, 4, {"A'", "B'"});
    const Point c = b.cut(ab, abi, tol);
    b.point("C", c, 5, {"AB", "A'B'"});

    // Position of C on line AB: between (1), beyond B (2) or before A (3).
    const Point ab_vec = bp - a;
    const double t = dot(c - a, ab_vec) / dot(ab_vec, ab_vec);
    const int proof_case = t > 1.0 ? 2 : (t < 0.0 ? 3 : 1);
    return b.finish(c, FixedPointMethod::TheoremParallels, proof_case);
}

FixedPointResult fixed_point(const Similarity& alpha, const Tolerances& tol) {
    require_non_isometric(alpha, tol);
    if (is_dilatation(alpha)) {
        return dilation_center(alpha, {0.0, 0.0}, std::nullopt, tol);
    }

    const auto recoverable = [](ErrorCode code) {
        return code == ErrorCode::ParallelLines || code == ErrorCode::DegenerateSelection ||
               code == ErrorCode::ConstructionFailed || code == ErrorCode::CoincidentPoints;
    };
    const auto residual = [&](const FixedPointResult& r) {
        return distance(alpha(r.point), r.point) / (1.0 + norm(r.point));
    };
    // Algorithm 1 on the first workable candidate line through `origin`.
    const auto algorithm1_from = [&](Point origin) -> std::optional<FixedPointResult> {
        std::optional<FixedPointResult> best;
        for (int start = 0; start < 3;) {
            try {
                const WitnessTriangles w = witness_triangles(alpha, start, tol, origin);
                start = w.candidate + 1;
                FixedPointResult r = fixed_point_algorithm1(alpha, w, tol);
                if (r.conditioning >= kNearParallelSine) return r;
                if (!best || r.conditioning > best->conditioning) best = std::move(r);
            } catch (const GeometryError& e) {
                if (!recoverable(e.code())) throw;
                ++start;
            }
        }
        return best;
    };

    std::optional<FixedPointResult> best = algorithm1_from({0.0, 0.0});
    for (int first = 0; first < 3 && !best; ++first) {
        try {
            best = fixed_point_via_theorem(alpha, first, tol);
        } catch (const GeometryError& e) {
            if (!recoverable(e.code())) throw;
        }
    }
    if (!best) {
        throw GeometryError(ErrorCode::ConstructionFailed,
                            "every witness and the parallels fallback degenerated");
    }

    // Near-dilatations put q ∩ q' far from C and the construction loses
    // digits. Rerunning with the candidate lines through the estimate brings
    // the witness back to the scale of C.
    if (best->method == FixedPointMethod::TheoremParallels) {
        std::optional<FixedPointResult> again = algorithm1_from(best->point);
        if (again && residual(*again) <= std::max(residual(*best), tol.eps_point)) {
            best = std::move(again);
        }
    }
    // The error in C is about the residual over the smallest singular value
    // of the linear part minus I.
    const auto [sin_a, cos_a] = sincos_deg(alpha.angle());
    const double gap = alpha.is_direct()
                           ? norm(Point{alpha.scale() * cos_a - 1.0, alpha.scale() * sin_a})
                           : std::abs(alpha.scale() - 1.0);
    const double target = tol.eps_point * std::min(1.0, gap);
    for (int pass = 0; pass < 3 && residual(*best) > target; ++pass) {
        std::optional<FixedPointResult> again = algorithm1_from(best->point);
        if (!again || residual(*again) >= residual(*best)) break;
        best = std::move(again);
    }
    return *best;
}

CollinearityWitness collinearity_witness(const Similarity& alpha, Point c, const Line& l,
                                         std::optional<double> offset, const Tolerances& tol) {
    const double side = l.signed_distance(c);
    if (std::abs(side) <= tol.eps_point * (1.0 + norm(c))) {
        throw GeometryError(ErrorCode::LineThroughCenter, "l passes through the fixed point");
    }
    const Line li = apply_line(alpha, l);
    if (is_parallel(l, li, tol)) {
        throw GeometryError(ErrorCode::ParallelImage, "l is parallel to its image");
    }
    const double shift = offset.value_or(side > 0.0 ? -std::max(1.0, std::abs(side))
                                                    : std::max(1.0, std::abs(side)));
    const Line m = Line::from_coefficients(l.a(), l.b(), l.c() + shift);
    if (m.residual(c) <= tol.eps_point * (1.0 + norm(c))) {
        throw GeometryError(ErrorCode::LineThroughCenter, "m passes through the fixed point");
    }
    if (std::abs(shift) <= tol.eps_point) {
        throw GeometryError(ErrorCode::DegenerateInput, "m must be distinct from l");
    }
    // Intersect in a frame centered at c: far-off centers otherwise cost the
    // line offsets most of their digits.
    const Similarity local(alpha.kind(), alpha.scale(), alpha.angle(), alpha(c) - c);
    const auto shifted = [&](const Line& x) {
        return Line::from_coefficients(x.a(), x.b(), x.c() - dot(x.normal(), c));
    };
    const Line l0 = shifted(l);
    const Line m0 = shifted(m);
    const Point d0 = intersect(l0, apply_line(local, l0), tol);
    const Point e0 = intersect(m0, apply_line(local, m0), tol);
    return {d0 + c, e0 + c, m, collinear({0.0, 0.0}, d0, e0, tol)};
}

AxisResult reflection_axis_detailed(const Similarity& alpha, Point c, Point p,
                                    const Tolerances& tol) {
    if (alpha.is_direct()) {
        throw GeometryError(ErrorCode::NotIndirect, "a direct similarity has no axis");
    }
    require_non_isometric(alpha, tol);
    if (distance(p, c) <= tol.eps_point) {
        throw GeometryError(ErrorCode::DegenerateProbe, "probe coincides with the center");
    }
    const Point pi = alpha(p);
    const Line bisector = angle_bisector(c, p, pi, tol);
    const Line across = perpendicular_through(bisector, c);

    const Similarity xi = stretch(c, alpha.scale());
    const double reach = std::max(1.0, distance(p, c));
    const std::array<Point, 3> samples{p, c + Point{reach, 0.0}, c + Point{0.0, reach}};
    const auto residual = [&](const Line& axis) {
        const Similarity rebuilt = compose(reflection(axis), xi);
        double worst = 0.0;
        for (Point x : samples) {
            const Point want = alpha(x);
            worst = std::max(worst, distance(rebuilt(x), want) / (1.0 + norm(want)));
        }
        return worst;
    };

    const double r_bisector = residual(bisector);
    const double r_across = residual(across);
    AxisResult result{r_bisector <= r_across ? bisector : across, p, pi,
                      std::min(r_bisector, r_across), {}};
    if (result.residual > 1e-8) {
        throw GeometryError(ErrorCode::ConstructionFailed,
                            "neither bisector recomposes the map; is c its fixed point?");
    }
    result.trace = {
        {"C", c, 1, {"axis"}},
        {"P", p, 1, {}},
        {"P'", pi, 1, {}},
        {"axis", result.axis, 2, {"C"}},
    };
    return result;
}

double rotation_angle_at(const Similarity& alpha, Point c, Point p, const Tolerances& tol) {
    if (!alpha.is_direct()) {
        throw GeometryError(ErrorCode::NotDirect, "an indirect similarity has no rotation angle");
    }
    require_non_isometric(alpha, tol);
    if (distance(p, c) <= tol.eps_point) {
        throw GeometryError(ErrorCode::DegenerateProbe, "probe coincides with the center");
    }
    const Point u = p - c;
    const Point v = alpha(p) - c;
    return atan2_deg(cross(u, v), dot(u, v));
}

}  // namespace simfix
