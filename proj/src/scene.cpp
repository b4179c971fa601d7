#include "simfix/scene.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace simfix {

using json = nlohmann::ordered_json;

namespace {

void only_keys(const json& obj, std::initializer_list<std::string_view> allowed,
               std::string_view where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool known = false;
        for (std::string_view a : allowed) known = known || key == a;
        if (!known) {
            throw SceneError("unknown key '" + key + "' in " + std::string(where));
        }
    }
}

const json& require(const json& obj, const char* key, std::string_view where) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw SceneError(std::string("missing '") + key + "' in " + std::string(where));
    }
    return obj.at(key);
}

double number(const json& value, std::string_view what) {
    if (!value.is_number()) {
        throw SceneError(std::string(what) + " must be a number");
    }
    return value.get<double>();
}

Point point(const json& value, std::string_view what) {
    if (!value.is_array() || value.size() != 2) {
        throw SceneError(std::string(what) + " must be a [x, y] pair");
    }
    const Point p{number(value[0], what), number(value[1], what)};
    if (!is_finite(p)) {
        throw SceneError(std::string(what) + " must be finite");
    }
    return p;
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw SceneError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

Similarity Scene::similarity() const {
    if (explicit_similarity) {
        return *explicit_similarity;
    }
    return from_correspondence(correspondence->source, correspondence->image, tol);
}

Scene parse_scene(std::string_view text) {
    const json doc = parse_json(text);
    if (!doc.is_object()) {
        throw SceneError("scene must be a JSON object");
    }
    only_keys(doc, {"similarity", "correspondence", "tolerances"}, "scene");
    const bool has_sim = doc.contains("similarity");
    const bool has_corr = doc.contains("correspondence");
    if (has_sim == has_corr) {
        throw SceneError("scene needs exactly one of 'similarity' or 'correspondence'");
    }

    Scene scene;
    if (doc.contains("tolerances")) {
        const json& t = doc.at("tolerances");
        if (!t.is_object()) throw SceneError("'tolerances' must be an object");
        only_keys(t, {"eps_parallel", "eps_point", "eps_degenerate", "eps_ratio"}, "tolerances");
        if (t.contains("eps_parallel")) scene.tol.eps_parallel = number(t["eps_parallel"], "eps_parallel");
        if (t.contains("eps_point")) scene.tol.eps_point = number(t["eps_point"], "eps_point");
        if (t.contains("eps_degenerate")) scene.tol.eps_degenerate = number(t["eps_degenerate"], "eps_degenerate");
        if (t.contains("eps_ratio")) scene.tol.eps_ratio = number(t["eps_ratio"], "eps_ratio");
        try {
            scene.tol.validate();
        } catch (const GeometryError& e) {
            throw SceneError(e.what());
        }
    }

    if (has_sim) {
        const json& s = doc.at("similarity");
        only_keys(s, {"kind", "scale", "angle_deg", "translation"}, "similarity");
        const json& kind = require(s, "kind", "similarity");
        if (!kind.is_string() || (kind != "direct" && kind != "indirect")) {
            throw SceneError("kind must be \"direct\" or \"indirect\"");
        }
        const double scale = number(require(s, "scale", "similarity"), "scale");
        const double angle = number(require(s, "angle_deg", "similarity"), "angle_deg");
        const Point t = point(require(s, "translation", "similarity"), "translation");
        try {
            scene.explicit_similarity =
                Similarity(kind == "direct" ? Kind::Direct : Kind::Indirect, scale, angle, t);
        } catch (const GeometryError& e) {
            throw SceneError(e.what());
        }
    } else {
        const json& c = doc.at("correspondence");
        only_keys(c, {"P", "Q", "R", "P'", "Q'", "R'"}, "correspondence");
        const auto vertex = [&](const char* key) { return point(require(c, key, "correspondence"), key); };
        scene.correspondence = Correspondence{{vertex("P"), vertex("Q"), vertex("R")},
                                              {vertex("P'"), vertex("Q'"), vertex("R'")}};
    }
    return scene;
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SceneError("cannot read scene file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scene(buffer.str());
}

std::string scene_to_json(const Similarity& alpha, const Tolerances& tol) {
    json doc;
    doc["similarity"] = {{"kind", std::string(to_string(alpha.kind()))},
                         {"scale", alpha.scale()},
                         {"angle_deg", alpha.angle()},
                         {"translation", {alpha.translation().x, alpha.translation().y}}};
    const Tolerances defaults;
    if (tol.eps_parallel != defaults.eps_parallel || tol.eps_point != defaults.eps_point ||
        tol.eps_degenerate != defaults.eps_degenerate || tol.eps_ratio != defaults.eps_ratio) {
        doc["tolerances"] = {{"eps_parallel", tol.eps_parallel},
                             {"eps_point", tol.eps_point},
                             {"eps_degenerate", tol.eps_degenerate},
                             {"eps_ratio", tol.eps_ratio}};
    }
    return doc.dump(2) + "\n";
}

GenConfig parse_gen_config(std::string_view text, GenConfig base) {
    const json doc = parse_json(text);
    if (!doc.is_object()) throw SceneError("config must be a JSON object");
    only_keys(doc,
              {"seed", "cases", "scale_range", "isometry_band", "translation_range", "kind_mix",
               "dilation_mix"},
              "config");
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) throw SceneError("seed must be a non-negative integer");
        base.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("cases")) {
        if (!doc["cases"].is_number_unsigned()) throw SceneError("cases must be a non-negative integer");
        base.cases = doc["cases"].get<std::size_t>();
    }
    if (doc.contains("scale_range")) {
        const Point range = point(doc["scale_range"], "scale_range");
        base.scale_lo = range.x;
        base.scale_hi = range.y;
    }
    if (doc.contains("isometry_band")) base.isometry_band = number(doc["isometry_band"], "isometry_band");
    if (doc.contains("translation_range")) {
        base.translation_range = number(doc["translation_range"], "translation_range");
    }
    if (doc.contains("kind_mix")) base.kind_mix = number(doc["kind_mix"], "kind_mix");
    if (doc.contains("dilation_mix")) base.dilation_mix = number(doc["dilation_mix"], "dilation_mix");
    return base;
}

std::string format_number(double value) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value + 0.0);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

std::string format_point(Point p) {
    return "(" + format_number(p.x) + "," + format_number(p.y) + ")";
}

std::string format_line(const Line& l) {
    return "(" + format_number(l.a()) + "," + format_number(l.b()) + "," + format_number(l.c()) + ")";
}

std::string describe(const SimilarityClass& cls) {
    std::string out(tag(cls));
    const auto num = [](double v) { return format_number(v); };
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Translation>) {
                out += " vector=" + format_point(c.vector);
            } else if constexpr (std::is_same_v<T, Rotation>) {
                out += " center=" + format_point(c.center) + " angle=" + num(c.angle);
            } else if constexpr (std::is_same_v<T, Reflection>) {
                out += " axis=" + format_line(c.axis);
            } else if constexpr (std::is_same_v<T, GlideReflection>) {
                out += " axis=" + format_line(c.axis) + " glide=" + format_point(c.glide);
            } else if constexpr (std::is_same_v<T, Stretch>) {
                out += " center=" + format_point(c.center) + " ratio=" + num(c.ratio);
            } else if constexpr (std::is_same_v<T, StretchRotation>) {
                out += " center=" + format_point(c.center) + " ratio=" + num(c.ratio) +
                       " angle=" + num(c.angle);
            } else if constexpr (std::is_same_v<T, StretchReflection>) {
                out += " center=" + format_point(c.center) + " ratio=" + num(c.ratio) +
                       " axis=" + format_line(c.axis);
            }
        },
        cls.value);
    const bool stretched = cls.value.index() >= 5;
    if (stretched && cls.is_dilatation) {
        out += " dilatation=true";
    }
    return out;
}

std::string class_to_json(const SimilarityClass& cls, const Similarity& alpha) {
    json out;
    out["class"] = std::string(tag(cls));
    out["is_dilatation"] = cls.is_dilatation;
    const auto pt = [](Point p) { return json::array({p.x + 0.0, p.y + 0.0}); };
    const auto ln = [](const Line& l) { return json::array({l.a(), l.b(), l.c()}); };
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Translation>) {
                out["vector"] = pt(c.vector);
            } else if constexpr (std::is_same_v<T, Rotation>) {
                out["center"] = pt(c.center);
                out["angle_deg"] = c.angle;
            } else if constexpr (std::is_same_v<T, Reflection>) {
                out["axis"] = ln(c.axis);
            } else if constexpr (std::is_same_v<T, GlideReflection>) {
                out["axis"] = ln(c.axis);
                out["glide"] = pt(c.glide);
            } else if constexpr (std::is_same_v<T, Stretch>) {
                out["center"] = pt(c.center);
                out["ratio"] = c.ratio;
            } else if constexpr (std::is_same_v<T, StretchRotation>) {
                out["center"] = pt(c.center);
                out["ratio"] = c.ratio;
                out["angle_deg"] = c.angle;
            } else if constexpr (std::is_same_v<T, StretchReflection>) {
                out["center"] = pt(c.center);
                out["ratio"] = c.ratio;
                out["axis"] = ln(c.axis);
            }
        },
        cls.value);
    out["similarity"] = {{"kind", std::string(to_string(alpha.kind()))},
                         {"scale", alpha.scale()},
                         {"angle_deg", alpha.angle()},
                         {"translation", pt(alpha.translation())}};
    return out.dump(2) + "\n";
}

}  // namespace simfix
