#pragma once

#include <optional>
#include <string_view>
#include <variant>

#include "simfix/geom.hpp"
#include "simfix/trace.hpp"

namespace simfix {

enum class Kind { Direct, Indirect };

std::string_view to_string(Kind kind);

// Angle comparisons on Similarity parameters, in degrees.
inline constexpr double kAngleEpsDeg = 1e-7;

struct Mat2 {
    double m00, m01, m10, m11;

    Point operator*(Point p) const { return {m00 * p.x + m01 * p.y, m10 * p.x + m11 * p.y}; }
    double det() const { return m00 * m11 - m01 * m10; }
};

/// A plane similarity p ↦ M·p + t.
///
/// Stored as (kind, scale, angle, translation) so that MᵀM = scale²·I holds
/// by construction. For a direct similarity M = scale·R(angle). For an
/// indirect one M = scale·[[cos, sin], [sin, −cos]] of `angle`, i.e. a
/// reflection in an axis of direction angle/2 followed by the stretch.
class Similarity {
public:
    // Throws InvalidRatio unless scale is positive and finite.
    Similarity(Kind kind, double scale, double angle_deg, Point translation);

    static Similarity identity() { return Similarity(Kind::Direct, 1.0, 0.0, {0.0, 0.0}); }

    Kind kind() const { return kind_; }
    double scale() const { return scale_; }
    double angle() const { return angle_; }  // degrees, [0, 360)
    Point translation() const { return translation_; }

    bool is_direct() const { return kind_ == Kind::Direct; }
    Mat2 linear() const;

    Point operator()(Point p) const { return linear() * p + translation_; }

private:
    Kind kind_;
    double scale_;
    double angle_;
    Point translation_;
};

// Constructors named after the transformations they build.
Similarity stretch(Point center, double ratio);
Similarity rotation(Point center, double theta_deg);
Similarity halfturn(Point center);
Similarity reflection(const Line& axis);
Similarity dilation(Point center, double ratio, bool with_halfturn);
Similarity translation(Point v);

inline Point apply(const Similarity& alpha, Point p) { return alpha(p); }

// Image of a line, by mapping two of its points and rejoining them.
Line apply_line(const Similarity& alpha, const Line& l);

// (alpha ∘ beta)(p) = alpha(beta(p)).
Similarity compose(const Similarity& alpha, const Similarity& beta);
Similarity inverse(const Similarity& alpha);

inline double ratio(const Similarity& alpha) { return alpha.scale(); }

bool is_isometry(const Similarity& alpha, const Tolerances& tol = {});
// Linear part is a positive or negative multiple of the identity.
bool is_dilatation(const Similarity& alpha);

// Pointwise comparison at a fixed set of sample points.
bool approx_equal(const Similarity& a, const Similarity& b, double rel_eps);

// Fit the similarity carrying t1 onto t2 from two vertex pairs; the third
// pair and the side ratios are checked. Throws DegenerateTriangle or
// NotSimilar.
Similarity from_correspondence(const Triangle& t1, const Triangle& t2, const Tolerances& tol = {});

enum class FixedPointMethod { Algebraic, DilationConstruction, TheoremParallels, Algorithm1 };

std::string_view to_string(FixedPointMethod method);

struct FixedPointResult {
    Point point;
    FixedPointMethod method = FixedPointMethod::Algebraic;
    std::optional<ConstructionTrace> trace;
    // Smallest |determinant| or intersection sine met along the way.
    double conditioning = 0.0;
    // 1, 2 or 3 when the parallels construction ended in an A-P-B, A-B-P
    // or P-A-B configuration; 0 when it stopped at an earlier fixed point.
    int proof_case = 0;
};

// Solves (I − M)·x = t. Throws NoUniqueFixedPoint when I − M is singular
// (identity, translations, reflections, glide reflections).
FixedPointResult fixed_point_algebraic(const Similarity& alpha, const Tolerances& tol = {});

struct Identity {};
struct Translation {
    Point vector;
};
struct Rotation {
    Point center;
    double angle;
};
struct Reflection {
    Line axis;
};
struct GlideReflection {
    Line axis;
    Point glide;
};
struct Stretch {
    Point center;
    double ratio;
};
struct StretchRotation {
    Point center;
    double ratio;
    double angle;
};
struct StretchReflection {
    Point center;
    double ratio;
    Line axis;
};

struct SimilarityClass {
    std::variant<Identity, Translation, Rotation, Reflection, GlideReflection, Stretch,
                 StretchRotation, StretchReflection>
        value;
    bool is_dilatation = false;
};

std::string_view tag(const SimilarityClass& cls);

SimilarityClass classify(const Similarity& alpha, const Tolerances& tol = {});

// Rebuilds a similarity from classification parameters.
Similarity to_similarity(const SimilarityClass& cls);

bool approx_equal(const SimilarityClass& a, const SimilarityClass& b, double eps);

// alpha = isometry ∘ stretch with both factors about the fixed point.
struct Decomposition {
    Similarity stretch;
    Similarity isometry;      // rotation about the center, or a reflection
    std::optional<Line> axis; // set for indirect input
    Point center;
};

// Throws IsometryInput when |scale − 1| <= eps_ratio.
Decomposition decompose(const Similarity& alpha, const Tolerances& tol = {});

}  // namespace simfix
