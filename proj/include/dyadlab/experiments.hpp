#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dyadlab/complexity.hpp"
#include "dyadlab/fractal.hpp"
#include "dyadlab/geometry.hpp"
#include "dyadlab/selection.hpp"

namespace dyadlab {

// Reproducible studies. Everything here is driven by a single seed through
// counter-based streams, so reports are byte-identical across runs and
// thread counts.
//
// The dimension studies (pinned distances, projection sweep, half-information
// rows) are HEURISTIC: finite-precision box-counting slopes, useful as
// numerical evidence and labeled as such in their CSV headers, never as
// proof.

// Lower-bound curves for pinned distance sets against a set of dimension s:
//   ours = (3/4) s
//   sw   = (s - 2 + sqrt(4 + s^2)) / 2
//   fs   = s (1 - (2 - s) / (2 (1 + 2s - s^2)))
// Valid for s in (0, 1].
struct BoundCurvePoint {
    double s = 0.0;
    double ours = 0.0;
    double sw = 0.0;
    double fs = 0.0;
};

BoundCurvePoint bound_curves_at(double s);
std::vector<BoundCurvePoint> bound_curves(const std::vector<double>& grid);
// n interior grid points s = i/(n+1), i = 1..n.
std::vector<double> interior_grid(std::size_t n);

struct StudyWindow {
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
};

struct PinnedStudyRow {
    Vec2 pin;
    DimensionFit fit;
};

struct PinnedStudyReport {
    std::string set_description;
    double declared_dim = 0.0;
    std::uint32_t r_max = 0;
    StudyWindow window;
    std::uint64_t seed = 0;
    std::vector<PinnedStudyRow> rows;
    double max_estimate = 0.0;
    double bound_ours = 0.0; // 0.75 * declared dimension
};

// Box-dimension estimates of pinned distance sets at `pins` cell centers
// sampled from the generated set.
PinnedStudyReport pinned_distance_study(const FractalSpec& spec, std::size_t pins,
                                        std::uint32_t r_max, StudyWindow window,
                                        std::uint64_t seed, int threads = 1);

struct SweepRow {
    double angle_turn = 0.0;
    DimensionFit fit;
    bool flagged = false; // estimate below half the set's own estimate
};

struct SweepReport {
    std::string set_description;
    double declared_dim = 0.0;
    double set_estimate = 0.0;
    double flag_threshold = 0.0;
    std::uint32_t r_max = 0;
    StudyWindow window;
    std::uint64_t seed = 0;
    bool jitter = false;
    std::vector<SweepRow> rows;
    std::size_t flagged_count = 0;
};

// Box-dimension estimates of projections in `directions` angles, uniform in
// [0, 1) turns, optionally with seeded within-stratum jitter.
SweepReport projection_sweep(const FractalSpec& spec, std::size_t directions, bool jitter,
                             std::uint32_t r_max, StudyWindow window, std::uint64_t seed,
                             int threads = 1);

struct HalfInfoRow {
    double lhs_bits = 0.0; // image growth: bits_r(image) - bits_s(image)
    double rhs_bits = 0.0; // half the set growth: (bits_r(E) - bits_s(E)) / 2
    double slack = 0.0;    // lhs - rhs
};

HalfInfoRow half_information_check(const CellSet& set, const DyadicPoint& pin, std::uint32_t r,
                                   std::uint32_t s);
HalfInfoRow half_information_check(const CellSet& set, const Direction& e, std::uint32_t r,
                                   std::uint32_t s);

struct LemmaStressSummary {
    std::uint64_t instances = 0;
    std::uint64_t satisfied = 0;       // hypotheses hold and a certificate was found
    std::uint64_t skipped = 0;         // hypotheses fail; nothing is claimed
    std::uint64_t counterexamples = 0; // hypotheses hold but no pair qualified
};

// Seeded random instance generator used by the stress driver and tests.
SelectionInstance random_selection_instance(std::uint64_t seed, std::int32_t cap_x,
                                            std::int32_t cap_v);

// Generates `count` seeded instances within the size caps, runs the pair
// search on every hypothesis-satisfying one, and tallies the outcomes.
// `counterexamples` must come back zero; anything else falsifies the engine.
LemmaStressSummary lemma_stress(std::uint64_t seed, std::size_t count, std::int32_t cap_x,
                                std::int32_t cap_v);

// CSV renderers. Callers prepend their own metadata lines (configuration
// echo); the renderers add the study's own parameters and data rows.
std::string bound_curves_csv(const std::vector<BoundCurvePoint>& points,
                             const std::vector<std::string>& metadata);
std::string pinned_study_csv(const PinnedStudyReport& report,
                             const std::vector<std::string>& metadata);
std::string sweep_csv(const SweepReport& report, const std::vector<std::string>& metadata);

} // namespace dyadlab
