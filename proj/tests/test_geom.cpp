#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "simfix/geom.hpp"

using namespace simfix;

namespace {

void expect_line(const Line& l, double a, double b, double c, double eps = 1e-12) {
    EXPECT_NEAR(l.a(), a, eps);
    EXPECT_NEAR(l.b(), b, eps);
    EXPECT_NEAR(l.c(), c, eps);
}

void expect_point(Point p, double x, double y, double eps = 1e-12) {
    EXPECT_NEAR(p.x, x, eps);
    EXPECT_NEAR(p.y, y, eps);
}

ErrorCode code_of(const auto& fn) {
    try {
        fn();
    } catch (const GeometryError& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected a GeometryError";
    return ErrorCode::ConstructionFailed;
}

struct Rand {
    std::mt19937_64 engine{20240601};
    double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(engine); }
    Point point(double r = 50.0) { return {uniform(-r, r), uniform(-r, r)}; }
};

}  // namespace

TEST(Tolerances, DefaultsAndValidation) {
    Tolerances tol;
    EXPECT_EQ(tol.eps_parallel, 1e-9);
    EXPECT_EQ(tol.eps_point, 1e-9);
    EXPECT_EQ(tol.eps_degenerate, 1e-12);
    EXPECT_EQ(tol.eps_ratio, 1e-3);
    EXPECT_NO_THROW(tol.validate());
    tol.eps_ratio = 1.0;
    EXPECT_EQ(code_of([&] { tol.validate(); }), ErrorCode::InvalidTolerance);
    tol = {};
    tol.eps_point = 0.0;
    EXPECT_EQ(code_of([&] { tol.validate(); }), ErrorCode::InvalidTolerance);
}

TEST(LineThrough, AxisCase) { expect_line(line_through({0, 0}, {4, 0}), 0, 1, 0); }

TEST(LineThrough, VerticalCase) { expect_line(line_through({4, 0}, {4, 8}), 1, 0, 4); }

TEST(LineThrough, ObliqueNormalized) {
    const double r5 = std::sqrt(5.0);
    expect_line(line_through({4, 0}, {0, 2}), 1 / r5, 2 / r5, 4 / r5);
}

TEST(LineThrough, CoincidentPointsRejected) {
    EXPECT_EQ(code_of([] { line_through({1, 1}, {1, 1}); }), ErrorCode::CoincidentPoints);
}

TEST(LineThrough, CanonicalSignIndependentOfOrder) {
    EXPECT_EQ(line_through({4, 0}, {0, 2}), line_through({0, 2}, {4, 0}));
    EXPECT_EQ(line_through({0, 3}, {0, -7}), line_through({0, -7}, {0, 3}));
    const Line l = line_through({-1, 5}, {3, -2});
    EXPECT_GT(l.a(), 0.0);
}

TEST(ParallelThrough, Examples) {
    expect_line(parallel_through(line_through({0, 0}, {1, 0}), {4, 2}), 0, 1, 2);
    expect_line(parallel_through(line_through({4, 0}, {4, 8}), {0, 8}), 1, 0, 0);
    const double r5 = std::sqrt(5.0);
    const Line l = Line::from_coefficients(1, 2, 4);
    expect_line(parallel_through(l, {0, 0}), 1 / r5, 2 / r5, 0);
}

TEST(Intersect, PerpendicularAxes) {
    expect_point(intersect(Line::from_coefficients(0, 1, 0), Line::from_coefficients(1, 0, 4)), 4, 0);
}

TEST(Intersect, WorkedExampleLines) {
    // x + 2y = 4 and y = 2x; substitution gives x = 4/5.
    const Line a = Line::from_coefficients(1, 2, 4);
    const Line b = Line::from_coefficients(2, -1, 0);
    expect_point(intersect(a, b), 0.8, 1.6, 1e-15);
}

TEST(Intersect, DistinctParallelsRejected) {
    EXPECT_EQ(code_of([] {
                  intersect(Line::from_coefficients(0, 1, 0), Line::from_coefficients(0, 1, 2));
              }),
              ErrorCode::ParallelLines);
}

TEST(Intersect, ReportsSine) {
    const Intersection hit =
        intersect_checked(Line::from_coefficients(0, 1, 0), Line::from_coefficients(1, 1, 0));
    EXPECT_NEAR(hit.sine, std::sqrt(0.5), 1e-15);
}

TEST(IsParallel, Examples) {
    const Line y0 = Line::from_coefficients(0, 1, 0);
    EXPECT_TRUE(is_parallel(y0, Line::from_coefficients(0, 1, 2)));
    EXPECT_FALSE(is_parallel(y0, Line::from_coefficients(1, 0, 4)));
    EXPECT_TRUE(is_parallel(y0, y0));
}

TEST(Collinear, Examples) {
    EXPECT_TRUE(collinear({0.8, 1.6}, {4, 0}, {0, 2}));
    EXPECT_FALSE(collinear({0, 0}, {1, 0}, {0, 1}));
    EXPECT_TRUE(collinear({0, 0}, {0, 0}, {5, 5}));
}

TEST(Collinear, RelativeToDiameter) {
    // Same shape at very different scales gives the same verdict.
    for (double s : {1e-6, 1.0, 1e6}) {
        EXPECT_TRUE(collinear({0, 0}, {s, 1e-14 * s}, {2 * s, 0})) << s;
        EXPECT_FALSE(collinear({0, 0}, {s, 1e-9 * s}, {2 * s, 0})) << s;
    }
}

TEST(Midpoint, Examples) {
    expect_point(midpoint({0, 0}, {2, 4}), 1, 2);
    expect_point(midpoint({-3, 0}, {-3, 0}), -3, 0);
    expect_point(midpoint({4, 0}, {0, 2}), 2, 1);
}

TEST(IsBetween, Examples) {
    EXPECT_TRUE(is_between({0, 0}, {1, 0}, {3, 0}));
    EXPECT_FALSE(is_between({0, 0}, {4, 0}, {3, 0}));
    EXPECT_FALSE(is_between({0, 0}, {1, 1}, {3, 0}));
}

TEST(IsBetween, CoincidentArgumentsRejected) {
    EXPECT_EQ(code_of([] { is_between({0, 0}, {0, 0}, {3, 0}); }), ErrorCode::DegenerateInput);
    EXPECT_EQ(code_of([] { is_between({0, 0}, {1, 0}, {1, 0}); }), ErrorCode::DegenerateInput);
    EXPECT_EQ(code_of([] { is_between({2, 2}, {1, 0}, {2, 2}); }), ErrorCode::DegenerateInput);
}

TEST(AngleBisector, SymmetricRays) {
    const Line l = angle_bisector({0, 0}, {1, 0}, {0, 1});
    const double h = std::sqrt(0.5);
    expect_line(l, h, -h, 0);
}

TEST(AngleBisector, StretchReflectionAxis) {
    expect_line(angle_bisector({-3, 0}, {0, 1}, {3, -2}), 0, 1, 0);
}

TEST(AngleBisector, ZeroAngle) { expect_line(angle_bisector({0, 0}, {1, 0}, {2, 0}), 0, 1, 0); }

TEST(AngleBisector, StraightAngleGivesPerpendicular) {
    expect_line(angle_bisector({1, 1}, {3, 1}, {-2, 1}), 1, 0, 1);
}

TEST(AngleBisector, DegenerateRays) {
    EXPECT_EQ(code_of([] { angle_bisector({0, 0}, {0, 0}, {1, 0}); }), ErrorCode::DegenerateInput);
    EXPECT_EQ(code_of([] { angle_bisector({0, 0}, {1, 0}, {0, 0}); }), ErrorCode::DegenerateInput);
}

TEST(Orientation, Examples) {
    EXPECT_EQ(orientation({0, 0}, {1, 0}, {0, 1}), 1);
    EXPECT_EQ(orientation({0, 0}, {0, 1}, {1, 0}), -1);
    EXPECT_EQ(orientation({0, 0}, {1, 1}, {2, 2}), 0);
}

TEST(Angles, ExactQuadrants) {
    EXPECT_EQ(sincos_deg(90.0).cos, 0.0);
    EXPECT_EQ(sincos_deg(90.0).sin, 1.0);
    EXPECT_EQ(sincos_deg(180.0).sin, 0.0);
    EXPECT_EQ(sincos_deg(-90.0).sin, -1.0);
    EXPECT_EQ(normalize_degrees(-90.0), 270.0);
    EXPECT_EQ(normalize_degrees(360.0), 0.0);
    EXPECT_NEAR(angular_distance_deg(359.5, 0.5), 1.0, 1e-12);
    EXPECT_NEAR(atan2_deg(-1.0, 0.0), 270.0, 1e-12);
}

TEST(GeomProperties, NormalizationIdempotence) {
    Rand rnd;
    for (int i = 0; i < 500; ++i) {
        const double a = rnd.uniform(-5, 5), b = rnd.uniform(-5, 5), c = rnd.uniform(-5, 5);
        const double k = rnd.uniform(0.01, 100) * (i % 2 ? -1.0 : 1.0);
        const Line l1 = Line::from_coefficients(a, b, c);
        const Line l2 = Line::from_coefficients(k * a, k * b, k * c);
        EXPECT_TRUE(approx_equal(l1, l2, 1e-12));
        EXPECT_NEAR(l1.a() * l1.a() + l1.b() * l1.b(), 1.0, 1e-14);
    }
}

TEST(GeomProperties, IntersectionResiduals) {
    Rand rnd;
    const Tolerances tol;
    for (int i = 0; i < 500; ++i) {
        const Line l1 = line_through(rnd.point(), rnd.point());
        const Line l2 = line_through(rnd.point(), rnd.point());
        if (is_parallel(l1, l2)) continue;
        const Point p = intersect(l1, l2);
        EXPECT_LE(l1.residual(p), tol.eps_point * (1.0 + norm(p)));
        EXPECT_LE(l2.residual(p), tol.eps_point * (1.0 + norm(p)));
    }
}

TEST(GeomProperties, ParallelThroughContainsPoint) {
    Rand rnd;
    for (int i = 0; i < 500; ++i) {
        const Line l = line_through(rnd.point(), rnd.point());
        const Point p = rnd.point();
        const Line m = parallel_through(l, p);
        EXPECT_TRUE(is_parallel(l, m));
        EXPECT_TRUE(contains(m, p));
    }
}

TEST(GeomProperties, BisectorReflectsRayOntoRay) {
    Rand rnd;
    for (int i = 0; i < 500; ++i) {
        const Point c = rnd.point(), p = rnd.point(), q = rnd.point();
        if (distance(p, c) < 1e-3 || distance(q, c) < 1e-3) continue;
        const Line l = angle_bisector(c, p, q);
        EXPECT_TRUE(contains(l, c));
        // Reflect unit(p - c) across the bisector direction: 2(u.d)d - u.
        const Point d = l.direction();
        const Point u = unit(p - c);
        const Point mirrored = 2.0 * dot(u, d) * d - u;
        const Point v = unit(q - c);
        EXPECT_NEAR(mirrored.x, v.x, 1e-9);
        EXPECT_NEAR(mirrored.y, v.y, 1e-9);
    }
}

TEST(GeomProperties, BetweennessSymmetric) {
    Rand rnd;
    for (int i = 0; i < 500; ++i) {
        const Point p = rnd.point(), q = rnd.point();
        const double t = rnd.uniform(-1.0, 2.0);
        const Point c = p + t * (q - p);
        if (distance(c, p) < 1e-6 || distance(c, q) < 1e-6) continue;
        EXPECT_EQ(is_between(p, c, q), is_between(q, c, p));
        EXPECT_EQ(is_between(p, c, q), t > 0.0 && t < 1.0);
    }
}

TEST(GeomProperties, OrientationAntisymmetric) {
    Rand rnd;
    for (int i = 0; i < 500; ++i) {
        const Point p = rnd.point(), q = rnd.point(), r = rnd.point();
        const int o = orientation(p, q, r);
        EXPECT_EQ(orientation(q, p, r), -o);
        EXPECT_EQ(orientation(p, r, q), -o);
        EXPECT_EQ(orientation(r, q, p), -o);
        EXPECT_EQ(orientation(q, r, p), o);
    }
}

TEST(GeomProperties, NonFiniteRejected) {
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_THROW(line_through({inf, 0}, {1, 1}), GeometryError);
    EXPECT_THROW(Line::from_coefficients(std::nan(""), 1, 0), GeometryError);
}
