#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <gtest/gtest.h>
#include <json.hpp>

#include "simfix/cli.hpp"
#include "simfix/scene.hpp"
#include "simfix/svg.hpp"

using namespace simfix;
using nlohmann::json;
namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

const char* kAlphaScene =
    R"({"similarity": {"kind": "direct", "scale": 2, "angle_deg": 90, "translation": [4, 0]}})";
const char* kBetaScene =
    R"({"similarity": {"kind": "indirect", "scale": 2, "angle_deg": 0, "translation": [3, 0]}})";
const char* kAlphaWitnessScene =
    R"({"correspondence": {"P": [0, 0], "Q": [4, 0], "R": [4, 2], "P'": [4, 0], "Q'": [4, 8], "R'": [0, 8]}})";
const char* kDilationScene =
    R"({"similarity": {"kind": "direct", "scale": 3, "angle_deg": 0, "translation": [-4, -6]}})";
const char* kRotationScene =
    R"({"similarity": {"kind": "direct", "scale": 1, "angle_deg": 90, "translation": [1, 0]}})";
const char* kIdentityScene =
    R"({"similarity": {"kind": "direct", "scale": 1, "angle_deg": 0, "translation": [0, 0]}})";
const char* kNotSimilarScene =
    R"({"correspondence": {"P": [0, 0], "Q": [1, 0], "R": [0, 1], "P'": [0, 0], "Q'": [2, 0], "R'": [0, 3]}})";

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("simfix_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string scene(const std::string& name, const char* text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "simfix");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        out_.str("");
        err_.str("");
        return run_cli(static_cast<int>(argv.size()), argv.data(), out_, err_);
    }

    std::string out() const { return out_.str(); }
    std::string err() const { return err_.str(); }

    static std::string slurp(const std::string& p) {
        std::ifstream in(p);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    }

private:
    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::multiset<std::string> svg_text_labels(const std::string& svg) {
    std::istringstream in(svg);
    pt::ptree tree;
    pt::read_xml(in, tree);
    std::multiset<std::string> labels;
    for (const auto& [name, child] : tree.get_child("svg")) {
        if (name == "text" && child.get<std::string>("<xmlattr>.class", "") == "label") {
            labels.insert(child.data());
        }
    }
    return labels;
}

}  // namespace

TEST_F(Cli, ClassifyAlphaStar) {
    EXPECT_EQ(run({"classify", scene("a.json", kAlphaScene)}), kExitOk);
    EXPECT_EQ(first_line(out()), "stretch_rotation center=(0.8,1.6) ratio=2 angle=90");
    const json doc = json::parse(out().substr(out().find('\n') + 1));
    EXPECT_EQ(doc["class"], "stretch_rotation");
    EXPECT_EQ(doc["ratio"], 2.0);
}

TEST_F(Cli, ClassifyBetaStar) {
    EXPECT_EQ(run({"classify", scene("b.json", kBetaScene)}), kExitOk);
    EXPECT_EQ(first_line(out()), "stretch_reflection center=(-3,0) ratio=2 axis=(0,1,0)");
}

TEST_F(Cli, ClassifyIdentity) {
    EXPECT_EQ(run({"classify", scene("i.json", kIdentityScene)}), kExitOk);
    EXPECT_EQ(first_line(out()), "identity");
}

TEST_F(Cli, ClassifyNotSimilar) {
    EXPECT_EQ(run({"classify", scene("n.json", kNotSimilarScene)}), kExitNotSimilar);
    EXPECT_NE(err().find("NotSimilar"), std::string::npos);
}

TEST_F(Cli, ParseErrors) {
    EXPECT_EQ(run({"classify", scene("bad.json", "{not json")}), kExitParseError);
    EXPECT_EQ(run({"classify", scene("both.json", R"({"similarity": {}, "correspondence": {}})")}),
              kExitParseError);
    EXPECT_EQ(run({"classify", scene("key.json",
                                     R"({"similarity": {"kind": "direct", "scale": 2, "angle_deg": 0, "translation": [0, 0], "extra": 1}})")}),
              kExitParseError);
    EXPECT_EQ(run({"classify", scene("neg.json",
                                     R"({"similarity": {"kind": "direct", "scale": -2, "angle_deg": 0, "translation": [0, 0]}})")}),
              kExitParseError);
    EXPECT_EQ(run({"classify", path("missing.json")}), kExitParseError);
    EXPECT_EQ(run({"bogus"}), kExitParseError);
    EXPECT_EQ(run({"fixpoint", scene("a.json", kAlphaScene), "--method", "magic"}), kExitParseError);
}

TEST_F(Cli, FixpointAlgorithm1WorkedTrace) {
    EXPECT_EQ(run({"fixpoint", scene("w.json", kAlphaWitnessScene), "--method", "algorithm1", "--trace"}),
              kExitOk);
    const std::string text = out();
    EXPECT_NE(text.find("C=(0.8,1.6)\n"), std::string::npos);
    EXPECT_NE(text.find("method=algorithm1\n"), std::string::npos);
    for (const char* line : {"D=(4,0)", "E=(0,2)", "F=(4,8)", "G=(0,0)"}) {
        EXPECT_NE(text.find(line), std::string::npos) << line;
    }
}

TEST_F(Cli, FixpointJsonTrace) {
    EXPECT_EQ(run({"fixpoint", scene("w.json", kAlphaWitnessScene), "--method", "algorithm1", "--trace",
                   "--json"}),
              kExitOk);
    const json doc = json::parse(out());
    EXPECT_NEAR(doc["C"][0].get<double>(), 0.8, 1e-15);
    EXPECT_NEAR(doc["C"][1].get<double>(), 1.6, 1e-15);
    std::vector<std::string> labels;
    for (const auto& e : doc["trace"]) labels.push_back(e["label"]);
    const std::vector<std::string> order{"m", "n", "m'", "n'", "D", "E", "a"};
    auto it = labels.begin();
    for (const auto& want : order) {
        it = std::find(it, labels.end(), want);
        EXPECT_NE(it, labels.end()) << want;
    }
}

TEST_F(Cli, FixpointAlgebraic) {
    EXPECT_EQ(run({"fixpoint", scene("a.json", kAlphaScene), "--method", "algebraic"}), kExitOk);
    EXPECT_EQ(first_line(out()), "C=(0.8,1.6)");
}

TEST_F(Cli, FixpointAutoAndTheorem) {
    EXPECT_EQ(run({"fixpoint", scene("b.json", kBetaScene)}), kExitOk);
    double x = 0, y = 0;
    ASSERT_EQ(std::sscanf(first_line(out()).c_str(), "C=(%lf,%lf)", &x, &y), 2) << out();
    EXPECT_NEAR(x, -3.0, 1e-12);
    EXPECT_NEAR(y, 0.0, 1e-12);
    EXPECT_EQ(run({"fixpoint", scene("a.json", kAlphaScene), "--method", "theorem"}), kExitOk);
    EXPECT_EQ(first_line(out()), "C=(0.8,1.6)");
    EXPECT_NE(out().find("proof_case=1"), std::string::npos);
    EXPECT_EQ(run({"fixpoint", scene("d.json", kDilationScene)}), kExitOk);
    EXPECT_EQ(first_line(out()), "C=(2,3)");
    EXPECT_NE(out().find("method=dilation"), std::string::npos);
}

TEST_F(Cli, FixpointExitCodes) {
    EXPECT_EQ(run({"fixpoint", scene("r.json", kRotationScene), "--method", "algorithm1"}), kExitIsometry);
    EXPECT_EQ(run({"fixpoint", scene("r.json", kRotationScene)}), kExitIsometry);
    EXPECT_EQ(run({"fixpoint", scene("a.json", kAlphaScene), "--method", "dilation"}),
              kExitConstructionFailed);
    EXPECT_EQ(run({"fixpoint", scene("d.json", kDilationScene), "--method", "algorithm1"}),
              kExitConstructionFailed);
}

TEST_F(Cli, FigureConstruction) {
    const std::string svg_path = path("a.svg");
    EXPECT_EQ(run({"figure", scene("w.json", kAlphaWitnessScene), "--out", svg_path}), kExitOk);
    const std::string svg = slurp(svg_path);
    const std::multiset<std::string> labels = svg_text_labels(svg);
    for (const char* want : {"m", "m'", "n", "n'", "a", "b", "D", "E", "F", "G", "C"}) {
        EXPECT_EQ(labels.count(want), 1u) << want;
    }
    EXPECT_NE(svg.find("class=\"fixed-point\""), std::string::npos);
    EXPECT_NE(svg.find("class=\"source-triangle\""), std::string::npos);
    EXPECT_NE(svg.find("class=\"image-triangle\""), std::string::npos);
}

TEST_F(Cli, FigureAxis) {
    const std::string svg_path = path("b.svg");
    EXPECT_EQ(run({"figure", scene("b.json", kBetaScene), "--out", svg_path, "--which", "axis"}), kExitOk);
    const std::string svg = slurp(svg_path);
    EXPECT_EQ(svg_text_labels(svg).count("axis"), 1u);
    EXPECT_NE(svg.find("<line class=\"axis\""), std::string::npos);
    EXPECT_EQ(run({"figure", scene("a.json", kAlphaScene), "--out", svg_path, "--which", "axis"}),
              kExitConstructionFailed);
}

TEST_F(Cli, FigureDilation) {
    const std::string svg_path = path("d.svg");
    EXPECT_EQ(run({"figure", scene("d.json", kDilationScene), "--out", svg_path, "--which", "dilation"}),
              kExitOk);
    const std::multiset<std::string> labels = svg_text_labels(slurp(svg_path));
    for (const char* want : {"A", "A'", "B", "B'", "AA'", "BB'", "C"}) {
        EXPECT_EQ(labels.count(want), 1u) << want;
    }
}

TEST_F(Cli, FigureWriteFailure) {
    EXPECT_EQ(run({"figure", scene("a.json", kAlphaScene), "--out", path("no/such/dir/x.svg")}),
              kExitWriteFailed);
}

TEST_F(Cli, SvgLabelsMatchTrace) {
    const FixedPointResult r = fixed_point(Similarity(Kind::Indirect, 0.5, 77, {3, -9}));
    const std::string svg = render_svg(*r.trace, "t");
    std::multiset<std::string> want;
    for (const TraceEntry& e : *r.trace) want.insert(e.label);
    EXPECT_EQ(svg_text_labels(svg), want);
    const std::vector<std::string> extracted = svg_labels(svg);
    EXPECT_EQ(std::multiset<std::string>(extracted.begin(), extracted.end()), want);
}

TEST_F(Cli, FuzzSmallRunDeterministic) {
    const std::string r1 = path("r1.json"), r2 = path("r2.json");
    EXPECT_EQ(run({"fuzz", "--seed", "1", "--cases", "200", "--out", r1}), kExitOk);
    EXPECT_EQ(run({"fuzz", "--seed", "1", "--cases", "200", "--out", r2}), kExitOk);
    EXPECT_EQ(slurp(r1), slurp(r2));
    const json doc = json::parse(slurp(r1));
    EXPECT_EQ(doc["equivalence"]["failed"], 0);
    EXPECT_LE(doc["equivalence"]["max_rel_error"].get<double>(), 1e-8);
}

TEST_F(Cli, FuzzZeroCases) {
    EXPECT_EQ(run({"fuzz", "--cases", "0"}), kExitOk);
    const json doc = json::parse(out());
    EXPECT_EQ(doc["equivalence"]["total"], 0);
    EXPECT_EQ(doc["invariants"]["total"], 0);
}

TEST_F(Cli, FuzzConfigFile) {
    const std::string cfg = scene("cfg.json", R"({"seed": 3, "cases": 40, "dilation_mix": 1.0, "kind_mix": 0.0})");
    EXPECT_EQ(run({"fuzz", "--config", cfg}), kExitOk);
    const json doc = json::parse(out());
    EXPECT_EQ(doc["config"]["seed"], 3);
    EXPECT_EQ(doc["equivalence"]["methods"]["dilation"], 40);
    EXPECT_EQ(run({"fuzz", "--config", scene("bad.json", R"({"cases": 1, "scale_range": [2, 1]})")}),
              kExitParseError);
}

TEST(SceneRoundTrip, ClassifiedSimilarityReparses) {
    for (const Similarity& a : {Similarity(Kind::Direct, 2, 90, {4, 0}), Similarity(Kind::Indirect, 0.3, 211.5, {-7, 1e-3}),
                                Similarity(Kind::Direct, 1, 33.25, {0.1, 0.2})}) {
        const Similarity back = to_similarity(classify(a));
        const Scene s = parse_scene(scene_to_json(back));
        EXPECT_TRUE(approx_equal(s.similarity(), a, 1e-12));
        EXPECT_EQ(s.similarity().kind(), a.kind());
    }
}

TEST(SceneRoundTrip, NumbersAreLossless) {
    const Similarity a(Kind::Indirect, 0.1 + 0.2, 1.0 / 3.0, {std::sqrt(2.0), -1e-300});
    const Scene s = parse_scene(scene_to_json(a));
    EXPECT_EQ(s.similarity().scale(), a.scale());
    EXPECT_EQ(s.similarity().angle(), a.angle());
    EXPECT_EQ(s.similarity().translation(), a.translation());
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(SceneParse, ToleranceOverrides) {
    const Scene s = parse_scene(
        R"({"similarity": {"kind": "direct", "scale": 2, "angle_deg": 0, "translation": [0, 0]}, "tolerances": {"eps_point": 1e-7}})");
    EXPECT_EQ(s.tol.eps_point, 1e-7);
    EXPECT_THROW(parse_scene(
                     R"({"similarity": {"kind": "direct", "scale": 2, "angle_deg": 0, "translation": [0, 0]}, "tolerances": {"eps_ratio": 2}})"),
                 SceneError);
}

TEST(Binary, RunsAsProcess) {
    const fs::path dir = fs::temp_directory_path() / "simfix_cli_binary";
    fs::create_directories(dir);
    std::ofstream(dir / "a.json") << kAlphaScene;
    const std::string cmd = std::string(SIMFIX_BINARY) + " classify " + (dir / "a.json").string() + " > " +
                            (dir / "out.txt").string();
    EXPECT_EQ(std::system(cmd.c_str()), 0);
    std::ifstream in(dir / "out.txt");
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "stretch_rotation center=(0.8,1.6) ratio=2 angle=90");
    const std::string bad = std::string(SIMFIX_BINARY) + " classify " + (dir / "none.json").string() + " 2>/dev/null";
    const int status = std::system(bad.c_str());
    EXPECT_EQ(WEXITSTATUS(status), kExitParseError);
    fs::remove_all(dir);
}
