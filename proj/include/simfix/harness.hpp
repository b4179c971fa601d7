#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "simfix/construction.hpp"

namespace simfix {

/// Population of random non-isometric similarities.
///
/// Scales are log-uniform over [scale_lo, scale_hi] with the band
/// |scale − 1| <= isometry_band removed; translations are uniform per
/// coordinate in [−translation_range, translation_range]; `kind_mix` is the
/// indirect fraction and `dilation_mix` the fraction of direct cases forced
/// to angle 0° or 180°.
struct GenConfig {
    std::uint64_t seed = 1;
    std::size_t cases = 1000;
    double scale_lo = 0.1;
    double scale_hi = 10.0;
    double isometry_band = 1e-3;
    double translation_range = 100.0;
    double kind_mix = 0.5;
    double dilation_mix = 0.2;

    // Throws GeometryError(InvalidConfig).
    void validate() const;
};

/// Per-case random stream: mt19937_64 seeded with
/// splitmix64(seed ⊕ splitmix64(index ⊕ splitmix64(stream))), doubles from the
/// top 53 bits. Both algorithms are fully specified, so sequences are the
/// same on every platform (std distributions are not, and are avoided).
class CaseRng {
public:
    CaseRng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream);

    double uniform01();
    double uniform(double lo, double hi);
    bool chance(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

Similarity gen_similarity(const GenConfig& config, std::size_t index);

// Relative-error decades: "0", "<1e-16", "1e-16..1e-15", ..., "1e-9..1e-8", ">1e-8".
inline constexpr std::size_t kHistogramBins = 11;
using Histogram = std::array<std::size_t, kHistogramBins>;
std::size_t histogram_bin(double rel_error);
std::string histogram_label(std::size_t bin);

struct CheckTally {
    std::size_t passed = 0;
    std::size_t failed = 0;
};

struct Failure {
    std::size_t index;
    std::string check;
    std::string detail;
};

struct WorstCase {
    std::size_t index = 0;
    Similarity alpha = Similarity::identity();
    std::optional<Point> oracle;
    std::optional<Point> constructed;
    std::string method;
    double abs_error = 0.0;
    double rel_error = 0.0;
    bool failed = false;
    ConstructionTrace trace;
};

struct Report {
    std::string suite;
    std::size_t total = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
    std::optional<WorstCase> worst_case;
    std::map<std::string, Histogram> histograms;
    std::map<std::string, std::size_t> methods;
    // [0]: stopped at an earlier fixed point; [1..3]: C between A and B,
    // beyond B, before A.
    std::array<std::size_t, 4> proof_cases{};
    std::map<std::string, CheckTally> checks;
    std::vector<Failure> failures;  // first kMaxListedFailures only
};

inline constexpr std::size_t kMaxListedFailures = 50;
// Relative agreement demanded between a construction and the algebraic solve.
inline constexpr double kAgreementTol = 1e-8;

// Below this intersection sine the harness re-probes the parallels
// construction with the later candidate lines.
inline constexpr double kShallowSine = 1e-3;

// Parallels construction from the first admissible candidate; when its
// conditioning is below kShallowSine, whichever candidate leaves the
// smallest residual |alpha(C) - C|.
FixedPointResult theorem_for_harness(const Similarity& alpha, const Tolerances& tol = {});

// A pass compares fixed_point() with fixed_point_algebraic(); non-dilatation
// cases also run the parallels construction for three-way agreement.
Report run_equivalence(const GenConfig& config, const Tolerances& tol = {});

// Replaces the point map of one case in the map-level invariants (ratio
// law, betweenness, collineation). Test-only fault injection.
struct FaultInjection {
    std::size_t case_index = 0;
    std::function<Point(Point)> map;
};

// One check per invariant per applicable case; Report::total counts checks.
Report run_invariants(const GenConfig& config, const Tolerances& tol = {},
                      const std::optional<FaultInjection>& fault = std::nullopt);

std::string to_json_text(const Report& report);
std::string fuzz_report_json(const GenConfig& config, const Report& equivalence,
                             const Report& invariants);

}  // namespace simfix
