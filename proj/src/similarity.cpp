#include "simfix/similarity.hpp"

#include <algorithm>
#include <array>
#include <complex>

namespace simfix {

std::string_view to_string(Kind kind) { return kind == Kind::Direct ? "direct" : "indirect"; }

std::string_view to_string(FixedPointMethod method) {
    switch (method) {
        case FixedPointMethod::Algebraic: return "algebraic";
        case FixedPointMethod::DilationConstruction: return "dilation";
        case FixedPointMethod::TheoremParallels: return "theorem";
        case FixedPointMethod::Algorithm1: return "algorithm1";
    }
    return "unknown";
}

Similarity::Similarity(Kind kind, double scale, double angle_deg, Point translation)
    : kind_(kind), scale_(scale), angle_(0.0), translation_(translation) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw GeometryError(ErrorCode::InvalidRatio, "similarity ratio must be positive");
    }
    if (!std::isfinite(angle_deg)) {
        throw GeometryError(ErrorCode::DegenerateInput, "similarity angle is not finite");
    }
    require_finite(translation, "translation");
    angle_ = normalize_degrees(angle_deg);
}

Mat2 Similarity::linear() const {
    const auto [s, c] = sincos_deg(angle_);
    if (kind_ == Kind::Direct) {
        return {scale_ * c, -scale_ * s, scale_ * s, scale_ * c};
    }
    return {scale_ * c, scale_ * s, scale_ * s, -scale_ * c};
}

Similarity stretch(Point center, double ratio) {
    require_finite(center, "center");
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
        throw GeometryError(ErrorCode::InvalidRatio, "stretch ratio must be positive");
    }
    return Similarity(Kind::Direct, ratio, 0.0, center - ratio * center);
}

Similarity rotation(Point center, double theta_deg) {
    require_finite(center, "center");
    const Similarity linear_only(Kind::Direct, 1.0, theta_deg, {0.0, 0.0});
    return Similarity(Kind::Direct, 1.0, theta_deg, center - linear_only(center));
}

Similarity halfturn(Point center) { return rotation(center, 180.0); }

Similarity reflection(const Line& axis) {
    // Reflection in the axis direction at angle phi has linear part F(2·phi).
    const Point d = axis.direction();
    const double doubled = atan2_deg(2.0 * d.x * d.y, d.x * d.x - d.y * d.y);
    const Similarity linear_only(Kind::Indirect, 1.0, doubled, {0.0, 0.0});
    const Point on_axis = axis.anchor();
    return Similarity(Kind::Indirect, 1.0, doubled, on_axis - linear_only(on_axis));
}

Similarity dilation(Point center, double ratio, bool with_halfturn) {
    const Similarity xi = stretch(center, ratio);
    return with_halfturn ? compose(halfturn(center), xi) : xi;
}

Similarity translation(Point v) { return Similarity(Kind::Direct, 1.0, 0.0, v); }

Line apply_line(const Similarity& alpha, const Line& l) {
    const Point p0 = l.anchor();
    // The image direction is M·d; forming it from the images of two points
    // would cancel when the anchor is far from the origin.
    return Line::through_direction(alpha(p0), alpha.linear() * l.direction());
}

Similarity compose(const Similarity& alpha, const Similarity& beta) {
    const double a = alpha.angle();
    const double b = beta.angle();
    Kind kind = Kind::Direct;
    double angle = 0.0;
    if (alpha.is_direct() && beta.is_direct()) {
        angle = a + b;
    } else if (alpha.is_direct()) {
        kind = Kind::Indirect;
        angle = a + b;
    } else if (beta.is_direct()) {
        kind = Kind::Indirect;
        angle = a - b;
    } else {
        angle = a - b;
    }
    const Point t = alpha.linear() * beta.translation() + alpha.translation();
    return Similarity(kind, alpha.scale() * beta.scale(), angle, t);
}

Similarity inverse(const Similarity& alpha) {
    // Direct: (s·R(θ))⁻¹ = R(−θ)/s. Indirect: (s·F(θ))⁻¹ = F(θ)/s.
    const double angle = alpha.is_direct() ? -alpha.angle() : alpha.angle();
    const Similarity linear_only(alpha.kind(), 1.0 / alpha.scale(), angle, {0.0, 0.0});
    return Similarity(alpha.kind(), 1.0 / alpha.scale(), angle,
                      -linear_only(alpha.translation()));
}

bool is_isometry(const Similarity& alpha, const Tolerances& tol) {
    return std::abs(alpha.scale() - 1.0) <= tol.eps_ratio;
}

bool is_dilatation(const Similarity& alpha) {
    if (!alpha.is_direct()) {
        return false;
    }
    return angular_distance_deg(alpha.angle(), 0.0) <= kAngleEpsDeg ||
           angular_distance_deg(alpha.angle(), 180.0) <= kAngleEpsDeg;
}

bool approx_equal(const Similarity& a, const Similarity& b, double rel_eps) {
    if (a.kind() != b.kind()) {
        return false;
    }
    static constexpr std::array<Point, 3> samples{Point{0, 0}, Point{1, 0}, Point{0, 1}};
    return std::all_of(samples.begin(), samples.end(), [&](Point p) {
        const Point pa = a(p);
        const Point pb = b(p);
        return distance(pa, pb) <= rel_eps * (1.0 + std::max(norm(pa), norm(pb)));
    });
}

Similarity from_correspondence(const Triangle& t1, const Triangle& t2, const Tolerances& tol) {
    for (Point p : {t1.p1, t1.p2, t1.p3, t2.p1, t2.p2, t2.p3}) {
        require_finite(p, "triangle vertex");
    }
    const int o1 = orientation(t1.p1, t1.p2, t1.p3, tol);
    const int o2 = orientation(t2.p1, t2.p2, t2.p3, tol);
    if (o1 == 0) {
        throw GeometryError(ErrorCode::DegenerateTriangle, "source triangle is degenerate");
    }
    if (o2 == 0) {
        throw GeometryError(ErrorCode::NotSimilar, "image triangle is degenerate");
    }

    const std::array<double, 3> ratios{distance(t2.p1, t2.p2) / distance(t1.p1, t1.p2),
                                       distance(t2.p2, t2.p3) / distance(t1.p2, t1.p3),
                                       distance(t2.p1, t2.p3) / distance(t1.p1, t1.p3)};
    for (double r : ratios) {
        if (std::abs(r / ratios[0] - 1.0) > tol.eps_ratio) {
            throw GeometryError(ErrorCode::NotSimilar, "side ratios disagree");
        }
    }

    // Complex form: direct z ↦ k·z + t, indirect z ↦ k·conj(z) + t.
    using C = std::complex<double>;
    const auto to_c = [](Point p) { return C(p.x, p.y); };
    const bool direct = o1 == o2;
    C dz = to_c(t1.p2) - to_c(t1.p1);
    if (!direct) {
        dz = std::conj(dz);
    }
    const C k = (to_c(t2.p2) - to_c(t2.p1)) / dz;
    const double scale = std::abs(k);
    const double angle = atan2_deg(k.imag(), k.real());
    const Kind kind = direct ? Kind::Direct : Kind::Indirect;
    const Similarity linear_only(kind, scale, angle, {0.0, 0.0});
    const Similarity fit(kind, scale, angle, t2.p1 - linear_only(t1.p1));

    const double size = std::max(diameter(t2), std::numeric_limits<double>::min());
    if (distance(fit(t1.p3), t2.p3) > tol.eps_ratio * size) {
        throw GeometryError(ErrorCode::NotSimilar, "third vertex does not follow the fit");
    }
    return fit;
}

FixedPointResult fixed_point_algebraic(const Similarity& alpha, const Tolerances& tol) {
    const Mat2 m = alpha.linear();
    const Mat2 a{1.0 - m.m00, -m.m01, -m.m10, 1.0 - m.m11};
    const double det = a.det();
    if (std::abs(det) <= tol.eps_degenerate) {
        throw GeometryError(ErrorCode::NoUniqueFixedPoint, "I - M is singular");
    }
    const Point t = alpha.translation();
    FixedPointResult result;
    result.point = {(t.x * a.m11 - a.m01 * t.y) / det, (a.m00 * t.y - a.m10 * t.x) / det};
    result.method = FixedPointMethod::Algebraic;
    result.conditioning = std::abs(det);
    return result;
}

std::string_view tag(const SimilarityClass& cls) {
    static constexpr std::array<std::string_view, 8> names{
        "identity", "translation", "rotation", "reflection", "glide_reflection",
        "stretch", "stretch_rotation", "stretch_reflection"};
    return names[cls.value.index()];
}

namespace {

Line axis_through(Point p, double doubled_angle) {
    const auto [s, c] = sincos_deg(doubled_angle / 2.0);
    return Line::through_direction(p, {c, s});
}

}  // namespace

SimilarityClass classify(const Similarity& alpha, const Tolerances& tol) {
    SimilarityClass cls;
    cls.is_dilatation = is_dilatation(alpha);
    const double s = alpha.scale();
    const double theta = alpha.angle();
    const bool isometry = is_isometry(alpha, tol);

    if (alpha.is_direct()) {
        const bool no_turn = angular_distance_deg(theta, 0.0) <= kAngleEpsDeg;
        if (isometry && no_turn) {
            const Point t = alpha.translation();
            if (norm(t) <= tol.eps_point) {
                cls.value = Identity{};
            } else {
                cls.value = Translation{t};
            }
        } else if (isometry) {
            cls.value = Rotation{fixed_point_algebraic(alpha, tol).point, theta};
        } else if (no_turn) {
            cls.value = Stretch{fixed_point_algebraic(alpha, tol).point, s};
        } else {
            cls.value = StretchRotation{fixed_point_algebraic(alpha, tol).point, s, theta};
        }
        return cls;
    }

    if (isometry) {
        // alpha∘alpha is the translation by twice the glide vector.
        const Point glide = compose(alpha, alpha).translation() / 2.0;
        const Point t = alpha.translation();
        const Point on_axis = (t - glide) / 2.0;
        const Line axis = axis_through(on_axis, theta);
        if (norm(glide) <= tol.eps_point) {
            cls.value = Reflection{axis};
        } else {
            cls.value = GlideReflection{axis, glide};
        }
        return cls;
    }

    const Point center = fixed_point_algebraic(alpha, tol).point;
    cls.value = StretchReflection{center, s, axis_through(center, theta)};
    return cls;
}

Similarity to_similarity(const SimilarityClass& cls) {
    struct Builder {
        Similarity operator()(const Identity&) const { return Similarity::identity(); }
        Similarity operator()(const Translation& c) const { return translation(c.vector); }
        Similarity operator()(const Rotation& c) const { return rotation(c.center, c.angle); }
        Similarity operator()(const Reflection& c) const { return reflection(c.axis); }
        Similarity operator()(const GlideReflection& c) const {
            return compose(translation(c.glide), reflection(c.axis));
        }
        Similarity operator()(const Stretch& c) const { return stretch(c.center, c.ratio); }
        Similarity operator()(const StretchRotation& c) const {
            return compose(rotation(c.center, c.angle), stretch(c.center, c.ratio));
        }
        Similarity operator()(const StretchReflection& c) const {
            return compose(reflection(c.axis), stretch(c.center, c.ratio));
        }
    };
    return std::visit(Builder{}, cls.value);
}

namespace {

bool close(double a, double b, double eps) {
    return std::abs(a - b) <= eps * (1.0 + std::max(std::abs(a), std::abs(b)));
}

bool close(Point a, Point b, double eps) {
    return distance(a, b) <= eps * (1.0 + std::max(norm(a), norm(b)));
}

bool close_angle(double a, double b, double eps) {
    return angular_distance_deg(a, b) <= std::max(kAngleEpsDeg, eps);
}

}  // namespace

bool approx_equal(const SimilarityClass& a, const SimilarityClass& b, double eps) {
    if (a.value.index() != b.value.index() || a.is_dilatation != b.is_dilatation) {
        return false;
    }
    return std::visit(
        [&](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const T& rhs = std::get<T>(b.value);
            if constexpr (std::is_same_v<T, Identity>) {
                return true;
            } else if constexpr (std::is_same_v<T, Translation>) {
                return close(lhs.vector, rhs.vector, eps);
            } else if constexpr (std::is_same_v<T, Rotation>) {
                return close(lhs.center, rhs.center, eps) && close_angle(lhs.angle, rhs.angle, eps);
            } else if constexpr (std::is_same_v<T, Reflection>) {
                return approx_equal(lhs.axis, rhs.axis, eps);
            } else if constexpr (std::is_same_v<T, GlideReflection>) {
                return approx_equal(lhs.axis, rhs.axis, eps) && close(lhs.glide, rhs.glide, eps);
            } else if constexpr (std::is_same_v<T, Stretch>) {
                return close(lhs.center, rhs.center, eps) && close(lhs.ratio, rhs.ratio, eps);
            } else if constexpr (std::is_same_v<T, StretchRotation>) {
                return close(lhs.center, rhs.center, eps) && close(lhs.ratio, rhs.ratio, eps) &&
                       close_angle(lhs.angle, rhs.angle, eps);
            } else {
                return close(lhs.center, rhs.center, eps) && close(lhs.ratio, rhs.ratio, eps) &&
                       approx_equal(lhs.axis, rhs.axis, eps);
            }
        },
        a.value);
}

Decomposition decompose(const Similarity& alpha, const Tolerances& tol) {
    if (is_isometry(alpha, tol)) {
        throw GeometryError(ErrorCode::IsometryInput, "an isometry has no stretch factor");
    }
    const Point c = fixed_point_algebraic(alpha, tol).point;
    const Similarity xi = stretch(c, alpha.scale());
    if (alpha.is_direct()) {
        return {xi, rotation(c, alpha.angle()), std::nullopt, c};
    }
    const Line axis = axis_through(c, alpha.angle());
    return {xi, reflection(axis), axis, c};
}

}  // namespace simfix
