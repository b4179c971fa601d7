#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "simfix/harness.hpp"
#include "simfix/similarity.hpp"

namespace simfix {

// Malformed scene or config text (syntax, missing or unknown keys).
class SceneError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Correspondence {
    Triangle source;
    Triangle image;
};

/// Scene file contents: an explicit similarity or a triangle
/// correspondence, plus optional tolerance overrides.
///
///   {"similarity": {"kind": "direct", "scale": 2, "angle_deg": 90,
///                   "translation": [4, 0]}}
///   {"correspondence": {"P": [0,0], "Q": [1,0], "R": [0,1],
///                       "P'": [4,0], "Q'": [4,2], "R'": [2,0]},
///    "tolerances": {"eps_point": 1e-9}}
struct Scene {
    std::optional<Similarity> explicit_similarity;
    std::optional<Correspondence> correspondence;
    Tolerances tol;

    // The explicit similarity, or the fit of the correspondence (which may
    // throw NotSimilar / DegenerateTriangle).
    Similarity similarity() const;
};

Scene parse_scene(std::string_view text);
Scene load_scene(const std::string& path);

// Explicit-similarity form, numbers in shortest round-trip notation.
std::string scene_to_json(const Similarity& alpha, const Tolerances& tol = {});

GenConfig parse_gen_config(std::string_view text, GenConfig base = {});

// Shortest decimal that reads back to the same double.
std::string format_number(double value);
std::string format_point(Point p);
std::string format_line(const Line& l);

// "stretch_rotation center=(0.8,1.6) ratio=2 angle=90"
std::string describe(const SimilarityClass& cls);
std::string class_to_json(const SimilarityClass& cls, const Similarity& alpha);

}  // namespace simfix
