#pragma once

#include <optional>

#include "simfix/similarity.hpp"

namespace simfix {

// Intersections whose angle sine falls below this are flagged as
// near-parallel; fixed_point() retries with another witness.
inline constexpr double kNearParallelSine = 1e-6;

/// A triangle PQR and its image P'Q'R' with PQ ∦ P'Q' and QR ∦ Q'R'.
struct WitnessTriangles {
    Triangle source;
    Triangle image;
    int candidate = -1;  // index of the candidate direction used, -1 if supplied
};

// Validates a caller-chosen source triangle against alpha. Throws
// DegenerateSelection when an invariant fails.
WitnessTriangles make_witness(const Similarity& alpha, const Triangle& source,
                              const Tolerances& tol = {});

// Picks q among the directions 0°, 45°, 90° through `origin` (starting at
// `first_candidate`) with alpha(q) ∦ q, then Q = q ∩ q', P = Q + dir(q),
// R = Q + dir(q').
WitnessTriangles witness_triangles(const Similarity& alpha, int first_candidate = 0,
                                   const Tolerances& tol = {}, Point origin = {});

// Center of a non-identity dilation from two probe points. `probe_b`
// overrides the default second probe (A plus the unit normal of AA').
FixedPointResult dilation_center(const Similarity& delta, Point probe_a = {0.0, 0.0},
                                 std::optional<Point> probe_b = std::nullopt,
                                 const Tolerances& tol = {});

// The six-step parallels construction on a witness pair.
FixedPointResult fixed_point_algorithm1(const Similarity& alpha, const WitnessTriangles& w,
                                        const Tolerances& tol = {});

// Existence-proof construction: A = l ∩ l', B = m ∩ m' with m ∥ l through
// A', and the fixed point AB ∩ A'B'.
FixedPointResult fixed_point_via_theorem(const Similarity& alpha, int first_candidate = 0,
                                         const Tolerances& tol = {});

// Dispatcher. Never consults the algebraic solve. A result whose residual
// exceeds eps_point gets up to three more Algorithm-1 passes with the candidate
// lines moved to the latest estimate.
FixedPointResult fixed_point(const Similarity& alpha, const Tolerances& tol = {});

struct CollinearityWitness {
    Point d;
    Point e;
    Line m;
    bool ok = false;
};

// D = l ∩ l', E = m ∩ m' for a parallel m off c, and whether c, D, E are
// collinear. `offset` is the signed shift of m from l along l's normal;
// by default m sits one unit (or |c to l|, if larger) beyond l, away from c.
CollinearityWitness collinearity_witness(const Similarity& alpha, Point c, const Line& l,
                                         std::optional<double> offset = std::nullopt,
                                         const Tolerances& tol = {});

struct AxisResult {
    Line axis;
    Point probe;
    Point image;
    double residual = 0.0;  // recomposition error of the chosen axis
    ConstructionTrace trace;
};

// The reflection axis of an indirect non-isometric similarity: the
// bisector of angle P C P' (or its perpendicular), whichever recomposes.
AxisResult reflection_axis_detailed(const Similarity& alpha, Point c, Point p,
                                    const Tolerances& tol = {});

inline Line reflection_axis(const Similarity& alpha, Point c, Point p, const Tolerances& tol = {}) {
    return reflection_axis_detailed(alpha, c, p, tol).axis;
}

// Counterclockwise angle from ray c→p to ray c→alpha(p), in [0, 360).
double rotation_angle_at(const Similarity& alpha, Point c, Point p, const Tolerances& tol = {});

}  // namespace simfix
