#include "simfix/geom.hpp"

#include <algorithm>
#include <numbers>

namespace simfix {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::CoincidentPoints: return "CoincidentPoints";
        case ErrorCode::ParallelLines: return "ParallelLines";
        case ErrorCode::DegenerateInput: return "DegenerateInput";
        case ErrorCode::InvalidRatio: return "InvalidRatio";
        case ErrorCode::InvalidTolerance: return "InvalidTolerance";
        case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
        case ErrorCode::NotSimilar: return "NotSimilar";
        case ErrorCode::NoUniqueFixedPoint: return "NoUniqueFixedPoint";
        case ErrorCode::IsometryInput: return "IsometryInput";
        case ErrorCode::NotADilation: return "NotADilation";
        case ErrorCode::IdentityInput: return "IdentityInput";
        case ErrorCode::IsDilatation: return "IsDilatation";
        case ErrorCode::DegenerateSelection: return "DegenerateSelection";
        case ErrorCode::ConstructionFailed: return "ConstructionFailed";
        case ErrorCode::LineThroughCenter: return "LineThroughCenter";
        case ErrorCode::ParallelImage: return "ParallelImage";
        case ErrorCode::NotIndirect: return "NotIndirect";
        case ErrorCode::NotDirect: return "NotDirect";
        case ErrorCode::DegenerateProbe: return "DegenerateProbe";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

namespace {

// Below this magnitude a normal component does not decide the canonical sign.
constexpr double kSignEps = 1e-12;

}  // namespace

void Tolerances::validate() const {
    const bool ok = eps_parallel > 0 && eps_point > 0 && eps_degenerate > 0 && eps_ratio > 0 &&
                    eps_ratio < 1;
    if (!ok) {
        throw GeometryError(ErrorCode::InvalidTolerance,
                            "tolerances must be positive and eps_ratio < 1");
    }
}

void require_finite(Point p, const char* what) {
    if (!is_finite(p)) {
        throw GeometryError(ErrorCode::DegenerateInput, std::string(what) + " is not finite");
    }
}

Point unit(Point v) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw GeometryError(ErrorCode::DegenerateInput, "cannot normalize a zero vector");
    }
    return v / n;
}

bool same_point(Point p, Point q, const Tolerances& tol) {
    const double scale = 1.0 + std::max(norm(p), norm(q));
    return distance(p, q) <= tol.eps_point * scale;
}

Line Line::from_coefficients(double a, double b, double c) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
        throw GeometryError(ErrorCode::DegenerateInput, "line coefficients must be finite");
    }
    const double n = std::hypot(a, b);
    if (!(n > 0.0)) {
        throw GeometryError(ErrorCode::DegenerateInput, "line normal is zero");
    }
    a /= n;
    b /= n;
    c /= n;
    const bool flip = std::abs(a) > kSignEps ? a < 0.0 : b < 0.0;
    if (flip) {
        a = -a;
        b = -b;
        c = -c;
    }
    // + 0.0 folds negative zeros.
    return Line(a + 0.0, b + 0.0, c + 0.0);
}

Line Line::through_direction(Point p, Point direction) {
    require_finite(p, "line point");
    const Point n = perp(unit(direction));
    return from_coefficients(n.x, n.y, dot(n, p));
}

bool approx_equal(const Line& l1, const Line& l2, double eps) {
    return std::abs(l1.a() - l2.a()) <= eps && std::abs(l1.b() - l2.b()) <= eps &&
           std::abs(l1.c() - l2.c()) <= eps * (1.0 + std::abs(l1.c()));
}

bool contains(const Line& l, Point p, const Tolerances& tol) {
    return l.residual(p) <= tol.eps_point * (1.0 + norm(p));
}

double signed_area(Point p, Point q, Point r) { return 0.5 * cross(q - p, r - p); }

double signed_area(const Triangle& t) { return signed_area(t.p1, t.p2, t.p3); }

double diameter(const Triangle& t) {
    return std::max({distance(t.p1, t.p2), distance(t.p2, t.p3), distance(t.p1, t.p3)});
}

Line line_through(Point p, Point q, const Tolerances& tol) {
    require_finite(p, "p");
    require_finite(q, "q");
    if (distance(p, q) <= tol.eps_point) {
        throw GeometryError(ErrorCode::CoincidentPoints, "a line needs two distinct points");
    }
    return Line::through_direction(midpoint(p, q), q - p);
}

Line parallel_through(const Line& l, Point p) {
    require_finite(p, "p");
    return Line::from_coefficients(l.a(), l.b(), dot(l.normal(), p));
}

Line perpendicular_through(const Line& l, Point p) {
    return Line::through_direction(p, l.normal());
}

double intersection_sine(const Line& l1, const Line& l2) {
    return std::abs(l1.a() * l2.b() - l2.a() * l1.b());
}

bool is_parallel(const Line& l1, const Line& l2, const Tolerances& tol) {
    return intersection_sine(l1, l2) <= tol.eps_parallel;
}

Intersection intersect_checked(const Line& l1, const Line& l2, const Tolerances& tol) {
    const double det = l1.a() * l2.b() - l2.a() * l1.b();
    if (std::abs(det) <= tol.eps_parallel) {
        throw GeometryError(ErrorCode::ParallelLines, "lines do not meet in a single point");
    }
    const double x = (l1.c() * l2.b() - l2.c() * l1.b()) / det;
    const double y = (l1.a() * l2.c() - l2.a() * l1.c()) / det;
    return {{x, y}, std::abs(det)};
}

bool collinear(Point p, Point q, Point r, const Tolerances& tol) {
    const double scale = std::max({distance(p, q), distance(q, r), distance(p, r)});
    return std::abs(signed_area(p, q, r)) <= tol.eps_degenerate * scale * scale;
}

Point midpoint(Point p, Point q) { return {0.5 * (p.x + q.x), 0.5 * (p.y + q.y)}; }

bool is_between(Point p, Point c, Point q, const Tolerances& tol) {
    if (distance(p, c) <= tol.eps_point || distance(c, q) <= tol.eps_point ||
        distance(p, q) <= tol.eps_point) {
        throw GeometryError(ErrorCode::DegenerateInput, "betweenness needs three distinct points");
    }
    return collinear(p, c, q, tol) && dot(p - c, q - c) < 0.0;
}

Line angle_bisector(Point c, Point p, Point q, const Tolerances& tol) {
    if (distance(p, c) <= tol.eps_point || distance(q, c) <= tol.eps_point) {
        throw GeometryError(ErrorCode::DegenerateInput, "angle arm has zero length");
    }
    const Point u = unit(p - c);
    const Point v = unit(q - c);
    const Point w = u + v;
    if (norm(w) <= tol.eps_parallel) {
        return Line::through_direction(c, perp(u));
    }
    return Line::through_direction(c, w);
}

int orientation(Point p, Point q, Point r, const Tolerances& tol) {
    if (collinear(p, q, r, tol)) {
        return 0;
    }
    return signed_area(p, q, r) > 0.0 ? 1 : -1;
}

double normalize_degrees(double degrees) {
    double r = std::fmod(degrees, 360.0);
    if (r < 0.0) {
        r += 360.0;
    }
    // Snap rounding residue onto exact quadrant angles.
    const double quadrant = std::round(r / 90.0) * 90.0;
    if (std::abs(r - quadrant) <= 1e-11) {
        r = quadrant;
    }
    if (r >= 360.0) {
        r -= 360.0;
    }
    return r + 0.0;
}

SinCos sincos_deg(double degrees) {
    const double r = normalize_degrees(degrees);
    if (r == 0.0) return {0.0, 1.0};
    if (r == 90.0) return {1.0, 0.0};
    if (r == 180.0) return {0.0, -1.0};
    if (r == 270.0) return {-1.0, 0.0};
    const double rad = r * std::numbers::pi / 180.0;
    return {std::sin(rad), std::cos(rad)};
}

double angular_distance_deg(double a, double b) {
    const double d = normalize_degrees(a - b);
    return std::min(d, 360.0 - d);
}

double atan2_deg(double y, double x) {
    return normalize_degrees(std::atan2(y, x) * 180.0 / std::numbers::pi);
}

}  // namespace simfix
