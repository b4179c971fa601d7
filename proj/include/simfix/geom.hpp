#pragma once

#include <cmath>
#include <optional>

#include "simfix/error.hpp"

namespace simfix {

// Thresholds shared by every geometric predicate. The defaults leave
// headroom for constructions that chain roughly ten intersections.
struct Tolerances {
    double eps_parallel = 1e-9;    // sine of the angle between two lines
    double eps_point = 1e-9;       // distance below which two points coincide
    double eps_degenerate = 1e-12; // signed area relative to diameter squared
    double eps_ratio = 1e-3;       // half-width of the isometry band around scale 1

    // Throws InvalidTolerance unless all fields are positive and eps_ratio < 1.
    void validate() const;
};

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator-(Point a) { return {-a.x, -a.y}; }
    friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
    friend Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }
    friend bool operator==(Point, Point) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline Point perp(Point a) { return {-a.y, a.x}; }
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Throws DegenerateInput for NaN or infinite coordinates.
void require_finite(Point p, const char* what);

// Unit vector; throws DegenerateInput for the zero vector.
Point unit(Point v);

// Points closer than eps_point scaled by their magnitude.
bool same_point(Point p, Point q, const Tolerances& tol = {});

/// Line a·x + b·y = c with a² + b² = 1 and the first non-negligible of
/// (a, b) positive, so equal lines have equal coefficients.
class Line {
public:
    // Throws DegenerateInput when (a, b) is (numerically) zero or any
    // coefficient is non-finite.
    static Line from_coefficients(double a, double b, double c);

    // Line through p with the given (non-zero) direction.
    static Line through_direction(Point p, Point direction);

    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }

    Point normal() const { return {a_, b_}; }
    // Unit direction (b, -a); horizontal lines point towards +x.
    Point direction() const { return {b_, -a_}; }
    // Foot of the perpendicular from the origin.
    Point anchor() const { return {a_ * c_, b_ * c_}; }

    double signed_distance(Point p) const { return a_ * p.x + b_ * p.y - c_; }
    double residual(Point p) const { return std::abs(signed_distance(p)); }

    friend bool operator==(const Line&, const Line&) = default;

private:
    Line(double a, double b, double c) : a_(a), b_(b), c_(c) {}

    double a_;
    double b_;
    double c_;
};

// Coefficient-wise comparison (canonical form makes this an equality test).
bool approx_equal(const Line& l1, const Line& l2, double eps);

bool contains(const Line& l, Point p, const Tolerances& tol = {});

struct Triangle {
    Point p1;
    Point p2;
    Point p3;
};

// Half the cross product; positive for counterclockwise (p, q, r).
double signed_area(Point p, Point q, Point r);
double signed_area(const Triangle& t);
double diameter(const Triangle& t);

// Throws CoincidentPoints when p and q are within eps_point.
Line line_through(Point p, Point q, const Tolerances& tol = {});

Line parallel_through(const Line& l, Point p);

Line perpendicular_through(const Line& l, Point p);

bool is_parallel(const Line& l1, const Line& l2, const Tolerances& tol = {});

// |sine| of the angle between two lines; 0 for parallels.
double intersection_sine(const Line& l1, const Line& l2);

struct Intersection {
    Point point;
    double sine = 0.0;  // conditioning of the 2x2 solve
};

// Throws ParallelLines when |sine| <= eps_parallel.
Intersection intersect_checked(const Line& l1, const Line& l2, const Tolerances& tol = {});

inline Point intersect(const Line& l1, const Line& l2, const Tolerances& tol = {}) {
    return intersect_checked(l1, l2, tol).point;
}

// Relative test: |area| <= eps_degenerate * (largest pairwise distance)².
bool collinear(Point p, Point q, Point r, const Tolerances& tol = {});

Point midpoint(Point p, Point q);

// P-C-Q. Throws DegenerateInput when any two arguments coincide.
bool is_between(Point p, Point c, Point q, const Tolerances& tol = {});

// Bisector of the angle pcq. A straight angle yields the perpendicular to
// the rays at c. Throws DegenerateInput when p or q coincides with c.
Line angle_bisector(Point c, Point p, Point q, const Tolerances& tol = {});

// -1, 0 or +1; 0 exactly when collinear(p, q, r) holds.
int orientation(Point p, Point q, Point r, const Tolerances& tol = {});

// Degree helpers. Multiples of 90 degrees are evaluated exactly.
struct SinCos {
    double sin;
    double cos;
};
SinCos sincos_deg(double degrees);
double normalize_degrees(double degrees);       // into [0, 360)
double angular_distance_deg(double a, double b); // shortest, in [0, 180]
double atan2_deg(double y, double x);            // normalized into [0, 360)

}  // namespace simfix
