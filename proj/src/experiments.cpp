#include "dyadlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <utility>

#include "dyadlab/parallel.hpp"
#include "dyadlab/rng.hpp"
#include "dyadlab/textio.hpp"

namespace dyadlab {

namespace {

void check_window(StudyWindow w, std::uint32_t r_max) {
    if (w.lo > w.hi || w.hi > r_max) throw parameter_error("study window malformed");
    if (w.hi - w.lo + 1 < 4) throw parameter_error("study window needs at least 4 precisions");
}

std::vector<CellSet> coarsening_ladder(const CellSet& set, StudyWindow w) {
    // One shared ladder of coarsenings; every pin and direction reuses it.
    std::vector<CellSet> ladder;
    ladder.reserve(w.hi - w.lo + 1);
    CellSet current = coarsen(set, w.hi);
    for (std::uint32_t r = w.hi;; --r) {
        ladder.push_back(current);
        if (r == w.lo) break;
        current = coarsen(current, r - 1);
    }
    std::reverse(ladder.begin(), ladder.end());
    return ladder;
}

DimensionFit fit_counts(const std::vector<std::uint64_t>& counts, StudyWindow w) {
    ComplexityProfile profile;
    profile.dim = 1;
    for (std::uint32_t r = w.lo; r <= w.hi; ++r) {
        profile.precisions.push_back(r);
        std::uint64_t n = counts[r - w.lo];
        profile.counts.push_back(n);
        profile.bits.push_back(std::log2(static_cast<double>(n)));
    }
    return dimension_estimate(profile, w.lo, w.hi);
}

} // namespace

BoundCurvePoint bound_curves_at(double s) {
    if (!(s > 0.0 && s <= 1.0)) throw domain_error("bound curves are defined for s in (0, 1]");
    BoundCurvePoint p;
    p.s = s;
    p.ours = 0.75 * s;
    p.sw = (s - 2.0 + std::sqrt(4.0 + s * s)) / 2.0;
    p.fs = s * (1.0 - (2.0 - s) / (2.0 * (1.0 + 2.0 * s - s * s)));
    return p;
}

std::vector<BoundCurvePoint> bound_curves(const std::vector<double>& grid) {
    std::vector<BoundCurvePoint> out;
    out.reserve(grid.size());
    for (double s : grid) out.push_back(bound_curves_at(s));
    return out;
}

std::vector<double> interior_grid(std::size_t n) {
    std::vector<double> grid;
    grid.reserve(n);
    for (std::size_t i = 1; i <= n; ++i)
        grid.push_back(static_cast<double>(i) / static_cast<double>(n + 1));
    return grid;
}

PinnedStudyReport pinned_distance_study(const FractalSpec& spec, std::size_t pins,
                                        std::uint32_t r_max, StudyWindow window,
                                        std::uint64_t seed, int threads) {
    check_window(window, r_max);
    if (pins == 0) throw parameter_error("need at least one pin");

    CellSet set = generate(spec, r_max);
    std::vector<DyadicPoint> pin_points = sample_points(set, pins, seed);
    std::vector<CellSet> ladder = coarsening_ladder(set, window);

    PinnedStudyReport report;
    report.set_description = spec.describe();
    report.declared_dim = spec.declared_dim();
    report.r_max = r_max;
    report.window = window;
    report.seed = seed;
    report.bound_ours = 0.75 * report.declared_dim;
    report.rows.resize(pins);

    parallel_for(pins, threads, [&](std::size_t i) {
        const DyadicPoint& pin = pin_points[i];
        std::vector<std::uint64_t> counts(window.hi - window.lo + 1);
        for (std::uint32_t r = window.lo; r <= window.hi; ++r)
            counts[r - window.lo] = pinned_distance_cells(ladder[r - window.lo], pin, r).size();
        report.rows[i] = {pin.value(), fit_counts(counts, window)};
    });

    report.max_estimate = -std::numeric_limits<double>::infinity();
    for (const PinnedStudyRow& row : report.rows)
        report.max_estimate = std::max(report.max_estimate, row.fit.slope);
    return report;
}

SweepReport projection_sweep(const FractalSpec& spec, std::size_t directions, bool jitter,
                             std::uint32_t r_max, StudyWindow window, std::uint64_t seed,
                             int threads) {
    check_window(window, r_max);
    if (directions == 0) throw parameter_error("need at least one direction");

    CellSet set = generate(spec, r_max);
    std::vector<CellSet> ladder = coarsening_ladder(set, window);

    SweepReport report;
    report.set_description = spec.describe();
    report.declared_dim = spec.declared_dim();
    report.r_max = r_max;
    report.window = window;
    report.seed = seed;
    report.jitter = jitter;

    {
        ComplexityProfile profile = compute_profile(set, window.lo, window.hi);
        report.set_estimate = dimension_estimate(profile, window.lo, window.hi).slope;
        report.flag_threshold = 0.5 * report.set_estimate;
    }

    Rng angles = Rng::seeded(seed).child(0xd14);
    report.rows.resize(directions);
    parallel_for(directions, threads, [&](std::size_t i) {
        double offset = jitter ? angles.unit_at(i) : 0.0;
        double angle = (static_cast<double>(i) + offset) / static_cast<double>(directions);
        Direction e = Direction::from_turns(angle);
        std::vector<std::uint64_t> counts(window.hi - window.lo + 1);
        for (std::uint32_t r = window.lo; r <= window.hi; ++r)
            counts[r - window.lo] = projection_cells(ladder[r - window.lo], e, r).size();
        SweepRow row;
        row.angle_turn = angle;
        row.fit = fit_counts(counts, window);
        row.flagged = row.fit.slope < report.flag_threshold;
        report.rows[i] = row;
    });

    for (const SweepRow& row : report.rows)
        if (row.flagged) ++report.flagged_count;
    return report;
}

namespace {

HalfInfoRow half_info_from_image(const CellSet& set, const CellSet& image, std::uint32_t r,
                                 std::uint32_t s) {
    HalfInfoRow row;
    row.lhs_bits = surrogate_k(image, r) - surrogate_k(image, s);
    row.rhs_bits = 0.5 * (surrogate_k(set, r) - surrogate_k(set, s));
    row.slack = row.lhs_bits - row.rhs_bits;
    return row;
}

} // namespace

HalfInfoRow half_information_check(const CellSet& set, const DyadicPoint& pin, std::uint32_t r,
                                   std::uint32_t s) {
    if (!(s < r)) throw parameter_error("half-information check needs s < r");
    return half_info_from_image(set, pinned_distance_cells(set, pin, r), r, s);
}

HalfInfoRow half_information_check(const CellSet& set, const Direction& e, std::uint32_t r,
                                   std::uint32_t s) {
    if (!(s < r)) throw parameter_error("half-information check needs s < r");
    return half_info_from_image(set, projection_cells(set, e, r), r, s);
}

SelectionInstance random_selection_instance(std::uint64_t seed, std::int32_t cap_x,
                                            std::int32_t cap_v) {
    if (cap_x < 1 || cap_v < 1) throw parameter_error("size caps must be positive");
    Rng rng = Rng::seeded(seed).child(0x1e44);

    SelectionInstance inst;
    inst.x_size = static_cast<std::int32_t>(1 + rng.index_at(static_cast<std::uint64_t>(cap_x), 0));
    inst.v_size = static_cast<std::int32_t>(1 + rng.index_at(static_cast<std::uint64_t>(cap_v), 1));

    // A spread of alphas; denser neighborhoods for larger alpha so the
    // density hypothesis is satisfiable either way.
    static constexpr std::pair<int, int> kAlphas[] = {{1, 4}, {1, 3}, {1, 2}, {2, 3}, {3, 4}, {4, 5}};
    auto [p, q] = kAlphas[rng.index_at(std::size(kAlphas), 2)];
    inst.alpha = {p, q};

    double density = 0.5 + 0.5 * rng.unit_at(3); // in [0.5, 1)
    for (std::int32_t v = 0; v < inst.v_size; ++v) {
        std::vector<std::int32_t> nv;
        for (std::int32_t d = 0; d < inst.x_size; ++d)
            if (rng.unit_at(4, std::uint64_t(v), std::uint64_t(d)) < density) nv.push_back(d);
        inst.neighborhoods.push_back(std::move(nv));
    }

    // Relation styles: empty, sparse hash-driven, dense hash-driven. Dense
    // ones mostly fail the similarity cap and exercise the skip path.
    std::uint64_t style = rng.index_at(4, 5);
    double rel_density;
    switch (style) {
    case 0: rel_density = 0.0; break;
    case 1: rel_density = 0.02; break;
    case 2: rel_density = 0.4 * rng.unit_at(6); break;
    default: rel_density = 0.15 + 0.8 * rng.unit_at(6); break;
    }
    Rng rel_rng = rng.child(0x7e1);
    inst.rel = [rel_rng, rel_density](std::int32_t d, std::int32_t u, std::int32_t v) {
        return rel_rng.unit_at(std::uint64_t(d), std::uint64_t(u), std::uint64_t(v)) < rel_density;
    };
    return inst;
}

LemmaStressSummary lemma_stress(std::uint64_t seed, std::size_t count, std::int32_t cap_x,
                                std::int32_t cap_v) {
    LemmaStressSummary summary;
    Rng rng = Rng::seeded(seed).child(0x57e5);
    for (std::size_t i = 0; i < count; ++i) {
        SelectionInstance inst = random_selection_instance(rng.at(i), cap_x, cap_v);
        ++summary.instances;
        if (!verify_hypotheses(inst).ok) {
            ++summary.skipped;
            continue;
        }
        auto cert = find_pair(inst);
        if (cert && exceeds_threshold(cert->witnesses, inst.alpha, inst.x_size))
            ++summary.satisfied;
        else
            ++summary.counterexamples;
    }
    return summary;
}

std::string bound_curves_csv(const std::vector<BoundCurvePoint>& points,
                             const std::vector<std::string>& metadata) {
    std::string out;
    for (const std::string& line : metadata) out += "# " + line + "\n";
    out += "s,ours,sw,fs\n";
    for (const BoundCurvePoint& p : points)
        out += strf("%.12g,%.12g,%.12g,%.12g\n", p.s, p.ours, p.sw, p.fs);
    return out;
}

std::string pinned_study_csv(const PinnedStudyReport& report,
                             const std::vector<std::string>& metadata) {
    std::string out;
    for (const std::string& line : metadata) out += "# " + line + "\n";
    out += "# HEURISTIC: finite-precision box-counting slopes, not a proof artifact\n";
    out += "# set: " + report.set_description + "\n";
    out += strf("# declared_dim: %.10g\n# r_max: %u\n# window: %u:%u\n# seed: %llu\n",
                report.declared_dim, report.r_max, report.window.lo, report.window.hi,
                static_cast<unsigned long long>(report.seed));
    out += "pin_x,pin_y,dim_est,stderr,r_lo,r_hi,bound_ours\n";
    for (const PinnedStudyRow& row : report.rows)
        out += strf("%.12g,%.12g,%.10g,%.10g,%u,%u,%.10g\n", row.pin.x, row.pin.y, row.fit.slope,
                    row.fit.stderr_slope, row.fit.r_lo, row.fit.r_hi, report.bound_ours);
    out += strf("# max_dim_est: %.10g\n# bound_ours: %.10g\n", report.max_estimate,
                report.bound_ours);
    return out;
}

std::string sweep_csv(const SweepReport& report, const std::vector<std::string>& metadata) {
    std::string out;
    for (const std::string& line : metadata) out += "# " + line + "\n";
    out += "# HEURISTIC: finite-precision box-counting slopes, not a proof artifact\n";
    out += "# set: " + report.set_description + "\n";
    out += strf("# declared_dim: %.10g\n# set_estimate: %.10g\n# flag_threshold: %.10g\n"
                "# r_max: %u\n# window: %u:%u\n# seed: %llu\n# jitter: %d\n",
                report.declared_dim, report.set_estimate, report.flag_threshold, report.r_max,
                report.window.lo, report.window.hi,
                static_cast<unsigned long long>(report.seed), report.jitter ? 1 : 0);
    out += "angle,dim_est,stderr,flagged\n";
    for (const SweepRow& row : report.rows)
        out += strf("%.12g,%.10g,%.10g,%d\n", row.angle_turn, row.fit.slope,
                    row.fit.stderr_slope, row.flagged ? 1 : 0);
    out += strf("# flagged: %zu of %zu\n", report.flagged_count, report.rows.size());
    return out;
}

} // namespace dyadlab
