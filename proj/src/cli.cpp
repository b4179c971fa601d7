#include "simfix/cli.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "simfix/construction.hpp"
#include "simfix/harness.hpp"
#include "simfix/scene.hpp"
#include "simfix/svg.hpp"

namespace simfix {

namespace {

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotSimilar:
        case ErrorCode::DegenerateTriangle:
        case ErrorCode::DegenerateInput:
        case ErrorCode::InvalidRatio:
            return kExitNotSimilar;
        case ErrorCode::IsometryInput:
        case ErrorCode::NoUniqueFixedPoint:
        case ErrorCode::IdentityInput:
            return kExitIsometry;
        case ErrorCode::InvalidConfig:
        case ErrorCode::InvalidTolerance:
            return kExitParseError;
        default:
            return kExitConstructionFailed;
    }
}

// Algorithm 1 on the scene's own triangles when they form a valid witness,
// otherwise on the first candidate witness that constructs.
FixedPointResult run_algorithm1(const Scene& scene, const Similarity& alpha) {
    const Tolerances& tol = scene.tol;
    if (is_isometry(alpha, tol)) {
        throw GeometryError(ErrorCode::IsometryInput, "the similarity is an isometry");
    }
    if (scene.correspondence) {
        try {
            return fixed_point_algorithm1(alpha, make_witness(alpha, scene.correspondence->source, tol),
                                          tol);
        } catch (const GeometryError& e) {
            if (e.code() != ErrorCode::DegenerateSelection && e.code() != ErrorCode::ParallelLines) {
                throw;
            }
        }
    }
    std::optional<GeometryError> last;
    for (int start = 0; start < 3;) {
        try {
            const WitnessTriangles w = witness_triangles(alpha, start, tol);
            start = w.candidate + 1;
            return fixed_point_algorithm1(alpha, w, tol);
        } catch (const GeometryError& e) {
            if (e.code() == ErrorCode::IsDilatation) throw;
            last = e;
            ++start;
        }
    }
    throw GeometryError(ErrorCode::ConstructionFailed,
                        last ? last->what() : "no witness triangles constructed");
}

FixedPointResult run_method(const Scene& scene, const Similarity& alpha, const std::string& method) {
    const Tolerances& tol = scene.tol;
    if (method == "algorithm1") return run_algorithm1(scene, alpha);
    if (method == "theorem") return fixed_point_via_theorem(alpha, 0, tol);
    if (method == "dilation") return dilation_center(alpha, {0.0, 0.0}, std::nullopt, tol);
    if (method == "algebraic") return fixed_point_algebraic(alpha, tol);
    return fixed_point(alpha, tol);
}

void print_trace(std::ostream& out, const ConstructionTrace& trace) {
    for (const TraceEntry& e : trace) {
        out << "trace step=" << e.step << " " << e.label << "="
            << (e.is_point() ? format_point(e.point()) : format_line(e.line())) << "\n";
    }
}

nlohmann::ordered_json trace_json(const ConstructionTrace& trace) {
    auto out = nlohmann::ordered_json::array();
    for (const TraceEntry& e : trace) {
        nlohmann::ordered_json item{{"label", e.label}, {"step", e.step}};
        if (e.is_point()) {
            item["point"] = {e.point().x, e.point().y};
        } else {
            item["line"] = {e.line().a(), e.line().b(), e.line().c()};
        }
        out.push_back(std::move(item));
    }
    return out;
}

int cmd_classify(const std::string& path, std::ostream& out) {
    const Scene scene = load_scene(path);
    const Similarity alpha = scene.similarity();
    const SimilarityClass cls = classify(alpha, scene.tol);
    out << describe(cls) << "\n";
    out << class_to_json(cls, alpha);
    return kExitOk;
}

int cmd_fixpoint(const std::string& path, const std::string& method, bool trace, bool as_json,
                 std::ostream& out) {
    const Scene scene = load_scene(path);
    const Similarity alpha = scene.similarity();
    const FixedPointResult r = run_method(scene, alpha, method);
    if (as_json) {
        nlohmann::ordered_json doc{{"C", {r.point.x, r.point.y}},
                                   {"method", std::string(to_string(r.method))},
                                   {"conditioning", r.conditioning}};
        if (r.method == FixedPointMethod::TheoremParallels) doc["proof_case"] = r.proof_case;
        if (trace && r.trace) doc["trace"] = trace_json(*r.trace);
        out << doc.dump(2) << "\n";
        return kExitOk;
    }
    out << "C=" << format_point(r.point) << "\n";
    out << "method=" << to_string(r.method) << "\n";
    out << "conditioning=" << format_number(r.conditioning) << "\n";
    if (r.method == FixedPointMethod::TheoremParallels) {
        out << "proof_case=" << r.proof_case << "\n";
    }
    if (trace && r.trace) {
        print_trace(out, *r.trace);
    }
    return kExitOk;
}

int cmd_figure(const std::string& path, const std::string& out_path, const std::string& which,
               std::ostream& out, std::ostream& err) {
    const Scene scene = load_scene(path);
    const Similarity alpha = scene.similarity();
    const Tolerances& tol = scene.tol;

    ConstructionTrace trace;
    std::string title;
    if (which == "dilation" || (which == "construction" && is_dilatation(alpha))) {
        trace = *dilation_center(alpha, {0.0, 0.0}, std::nullopt, tol).trace;
        title = "Fixed point of a dilation";
    } else if (which == "construction") {
        trace = *run_algorithm1(scene, alpha).trace;
        title = alpha.is_direct() ? "Fixed point of a stretch rotation"
                                  : "Fixed point of a stretch reflection";
    } else {
        if (alpha.is_direct()) {
            throw GeometryError(ErrorCode::NotIndirect, "only stretch reflections have an axis");
        }
        const FixedPointResult r = run_algorithm1(scene, alpha);
        trace = *r.trace;
        const TraceEntry* p = find(trace, "P");
        const AxisResult axis = reflection_axis_detailed(alpha, r.point, p->point(), tol);
        trace.push_back({"axis", axis.axis, 7, {"C"}});
        title = "Fixed point and axis of a stretch reflection";
    }

    const std::string svg = render_svg(trace, title);
    std::ofstream file(out_path);
    file << svg;
    file.close();
    if (!file) {
        err << "error: cannot write '" << out_path << "'\n";
        return kExitWriteFailed;
    }
    out << "wrote " << out_path << " (" << trace.size() << " labeled elements)\n";
    return kExitOk;
}

int cmd_fuzz(GenConfig config, const std::string& config_path, std::optional<std::uint64_t> seed,
             std::optional<std::size_t> cases, const std::string& out_path, std::ostream& out,
             std::ostream& err) {
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw SceneError("cannot read config file '" + config_path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        config = parse_gen_config(buffer.str(), config);
    }
    if (seed) config.seed = *seed;
    if (cases) config.cases = *cases;
    config.validate();

    const Report equivalence = run_equivalence(config);
    const Report invariants = run_invariants(config);
    const std::string text = fuzz_report_json(config, equivalence, invariants);
    if (out_path.empty() || out_path == "-") {
        out << text;
    } else {
        std::ofstream file(out_path);
        file << text;
        file.close();
        if (!file) {
            err << "error: cannot write '" << out_path << "'\n";
            return kExitWriteFailed;
        }
        out << "equivalence: " << equivalence.passed << "/" << equivalence.total
            << " passed, max relative error " << format_number(equivalence.max_rel_error) << "\n";
        out << "invariants: " << invariants.passed << "/" << invariants.total << " checks passed\n";
    }
    const bool ok = equivalence.failed == 0 && invariants.failed == 0;
    return ok ? kExitOk : kExitFuzzFailures;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Classify plane similarities and construct their fixed points", "simfix"};
    app.require_subcommand(1);

    std::string scene_path;
    std::string method = "auto";
    bool show_trace = false;
    bool as_json = false;
    std::string figure_out;
    std::string which = "construction";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> cases;
    std::string config_path;
    std::string report_path;

    auto* classify_cmd = app.add_subcommand("classify", "Classify the similarity of a scene");
    classify_cmd->add_option("scene", scene_path, "Scene file (JSON)")->required();

    auto* fixpoint_cmd = app.add_subcommand("fixpoint", "Construct the fixed point");
    fixpoint_cmd->add_option("scene", scene_path, "Scene file (JSON)")->required();
    fixpoint_cmd->add_option("--method", method, "auto|algorithm1|theorem|dilation|algebraic")
        ->check(CLI::IsMember({"auto", "algorithm1", "theorem", "dilation", "algebraic"}));
    fixpoint_cmd->add_flag("--trace", show_trace, "Print the labeled construction trace");
    fixpoint_cmd->add_flag("--json", as_json, "Emit JSON instead of key=value lines");

    auto* figure_cmd = app.add_subcommand("figure", "Render the construction as SVG");
    figure_cmd->add_option("scene", scene_path, "Scene file (JSON)")->required();
    figure_cmd->add_option("--out", figure_out, "Output SVG path")->required();
    figure_cmd->add_option("--which", which, "construction|dilation|axis")
        ->check(CLI::IsMember({"construction", "dilation", "axis"}));

    auto* fuzz_cmd = app.add_subcommand("fuzz", "Run the randomized equivalence and invariant suites");
    fuzz_cmd->add_option("--seed", seed, "Generator seed (default 1)");
    fuzz_cmd->add_option("--cases", cases, "Number of generated similarities (default 1000)");
    fuzz_cmd->add_option("--config", config_path, "GenConfig JSON file");
    fuzz_cmd->add_option("--out", report_path, "Report path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitParseError;
    }

    try {
        if (*classify_cmd) return cmd_classify(scene_path, out);
        if (*fixpoint_cmd) return cmd_fixpoint(scene_path, method, show_trace, as_json, out);
        if (*figure_cmd) return cmd_figure(scene_path, figure_out, which, out, err);
        return cmd_fuzz(GenConfig{}, config_path, seed, cases, report_path, out, err);
    } catch (const SceneError& e) {
        err << "error: " << e.what() << "\n";
        return kExitParseError;
    } catch (const GeometryError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    }
}

}  // namespace simfix
