// dyadlab: command-line front end for the dyadic fractal laboratory.
//
// Subcommands: gen, dims, pindist, project, fig1, lemma, annulus, halfinfo.
// Exit codes: 0 success, 1 failed verdict (lemma counterexample, broken
// dominance), 2 bad flags, 3 I/O failure, 4 violated precondition.
//
// Every CSV starts with a '#' metadata line holding a replayable command
// line. --threads is deliberately not echoed: results are independent of the
// worker count, and the files must stay byte-identical across it.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dyadlab/experiments.hpp"
#include "dyadlab/textio.hpp"

using namespace dyadlab;

namespace {

// Flag values that fail structural parsing (not library preconditions).
struct flag_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

StudyWindow parse_window(const std::string& text) {
    std::uint32_t lo = 0, hi = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%u:%u%c", &lo, &hi, &tail) != 2)
        throw flag_error("--window expects lo:hi, got '" + text + "'");
    return {lo, hi};
}

Vec2 parse_vec2(const std::string& text, const char* flag) {
    double x = 0.0, y = 0.0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf,%lf%c", &x, &y, &tail) != 2)
        throw flag_error(std::string(flag) + " expects x,y, got '" + text + "'");
    return {x, y};
}

std::vector<std::uint32_t> parse_digits(const std::string& text) {
    std::vector<std::uint32_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            std::size_t used = 0;
            unsigned long v = std::stoul(item, &used);
            if (used != item.size() || v > 0xffffffffUL) throw std::invalid_argument(item);
            out.push_back(static_cast<std::uint32_t>(v));
        } catch (const std::exception&) {
            throw flag_error("--digits expects comma-separated integers, got '" + text + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

// Flags shared by every subcommand that builds a set from spec parameters.
struct SpecFlags {
    std::string kind = "product";
    std::uint32_t base = 4;
    std::string digits = "0,3";
    double dim = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--kind", kind, "cantor | product | randomtree | square | segment");
        cmd->add_option("--base", base, "digit base, a power of two (cantor/product)");
        cmd->add_option("--digits", digits, "allowed digits, e.g. 0,3 (cantor/product)");
        cmd->add_option("--dim", dim, "target dimension in [0,2] (randomtree)");
    }

    FractalSpec build(std::uint64_t seed) const {
        FractalSpec spec;
        if (kind == "cantor") spec.kind = FractalKind::digit_cantor;
        else if (kind == "product") spec.kind = FractalKind::product;
        else if (kind == "randomtree") spec.kind = FractalKind::random_tree;
        else if (kind == "square") spec.kind = FractalKind::full_square;
        else if (kind == "segment") spec.kind = FractalKind::segment;
        else throw flag_error("--kind must be cantor, product, randomtree, square or segment");
        spec.digit_base = base;
        spec.digits = parse_digits(digits);
        spec.target_dim = dim;
        spec.seed = seed;
        return spec;
    }

    // The spec part of the replayable command line; only flags the chosen
    // kind actually consumes.
    std::string echo() const {
        std::string out = "--kind " + kind;
        if (kind == "cantor" || kind == "product")
            out += strf(" --base %u --digits %s", base, digits.c_str());
        if (kind == "randomtree") out += strf(" --dim %.17g", dim);
        return out;
    }
};

void deliver(const std::string& csv, const std::string& out_path) {
    if (out_path.empty()) std::fputs(csv.c_str(), stdout);
    else atomic_write_file(out_path, csv);
}

void maybe_echo(bool echo, const std::string& config) {
    if (echo) std::printf("%s\n", config.c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale laboratory for dyadic fractal geometry"};
    app.require_subcommand(1);

    // Shared flag storage. Subcommands bind the subset they use.
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_path;
    std::uint32_t depth = 16;
    std::string window_text;
    bool echo_config = false;

    auto add_shared = [&](CLI::App* cmd, bool with_depth, bool with_window) {
        cmd->add_option("--seed", seed, "root seed for all randomness");
        cmd->add_option("--out", out_path, "output path (default: standard output)");
        cmd->add_option("--threads", threads, "worker threads (never changes results)");
        if (with_depth) cmd->add_option("--depth", depth, "generation precision r");
        if (with_window)
            cmd->add_option("--window", window_text, "fit window as lo:hi precisions");
        cmd->add_flag("--echo-config", echo_config,
                      "print the replayable command line before running");
    };

    SpecFlags gen_spec;
    CLI::App* gen = app.add_subcommand("gen", "generate a cell set and write a DYCS file");
    gen_spec.attach(gen);
    add_shared(gen, true, false);

    std::string dims_in;
    std::uint32_t dims_s0 = 0;
    bool dims_s0_set = false;
    CLI::App* dims = app.add_subcommand("dims", "box-counting profile and dimension estimate");
    dims->add_option("--in", dims_in, "input DYCS file")->required();
    dims->add_option("--s0", dims_s0, "base precision for the conditional bits column")
        ->each([&](const std::string&) { dims_s0_set = true; });
    add_shared(dims, false, true);

    SpecFlags pin_spec;
    std::size_t pins = 64;
    CLI::App* pindist = app.add_subcommand("pindist", "pinned distance-set dimension study");
    pin_spec.attach(pindist);
    pindist->add_option("--pins", pins, "number of sampled pin points");
    add_shared(pindist, true, true);

    SpecFlags proj_spec;
    std::size_t directions = 360;
    bool jitter = false;
    CLI::App* project = app.add_subcommand("project", "projection dimension sweep over angles");
    proj_spec.attach(project);
    project->add_option("--directions", directions, "number of swept angles");
    project->add_flag("--jitter", jitter, "jitter each angle inside its stratum");
    add_shared(project, true, true);

    std::size_t samples = 512;
    CLI::App* fig1 = app.add_subcommand("fig1", "lower-bound curves and dominance verdict");
    fig1->add_option("--samples", samples, "interior grid points in (0,1)");
    add_shared(fig1, false, false);

    std::size_t trials = 10000;
    std::int32_t cap_x = 50, cap_v = 50;
    CLI::App* lemma = app.add_subcommand("lemma", "stress the selection engine for counterexamples");
    lemma->add_option("--trials", trials, "number of random instances");
    lemma->add_option("--capx", cap_x, "largest ground-set size");
    lemma->add_option("--capv", cap_v, "largest candidate-set size");
    add_shared(lemma, false, false);

    std::string c1_text = "0,0", c2_text = "0.01,0";
    double r1 = 1.0, r2 = 1.0, eps = 2e-4;
    CLI::App* annulus = app.add_subcommand("annulus", "cover a thin annulus intersection by arcs");
    annulus->add_option("--c1", c1_text, "first center as x,y");
    annulus->add_option("--r1", r1, "first radius");
    annulus->add_option("--c2", c2_text, "second center as x,y");
    annulus->add_option("--r2", r2, "second radius");
    annulus->add_option("--eps", eps, "annulus thickness");
    add_shared(annulus, false, false);

    SpecFlags half_spec;
    std::uint32_t coarse = 8;
    std::optional<double> half_angle;
    std::string half_pin_text;
    CLI::App* halfinfo = app.add_subcommand("halfinfo", "image bits against half the set bits");
    half_spec.attach(halfinfo);
    halfinfo->add_option("--coarse", coarse, "coarse precision s (bits measured from s to depth)");
    halfinfo->add_option("--angle", half_angle, "projection direction in turns");
    halfinfo->add_option("--pin", half_pin_text, "distance-set pin as x,y");
    add_shared(halfinfo, true, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) {
            FractalSpec spec = gen_spec.build(seed);
            std::string config = strf("dyadlab gen %s --depth %u --seed %llu",
                                      gen_spec.echo().c_str(), depth,
                                      static_cast<unsigned long long>(seed));
            if (!out_path.empty()) config += " --out " + out_path;
            maybe_echo(echo_config, config);
            CellSet set = generate(spec, depth);
            if (!out_path.empty()) write_dycs(set, out_path);
            std::printf("cells %llu\ndeclared_dim %.10g\n",
                        static_cast<unsigned long long>(set.size()), spec.declared_dim());
            return 0;
        }

        if (*dims) {
            CellSet set = read_dycs(dims_in);
            StudyWindow w = window_text.empty() ? StudyWindow{0, set.precision}
                                                : parse_window(window_text);
            std::uint32_t s0 = dims_s0_set ? dims_s0 : w.lo;
            std::string config = strf("dyadlab dims --in %s --window %u:%u --s0 %u",
                                      dims_in.c_str(), w.lo, w.hi, s0);
            maybe_echo(echo_config, config);
            ComplexityProfile profile = compute_profile(set, w.lo, w.hi);
            DimensionFit fit = dimension_estimate(profile, w.lo, w.hi);
            std::string csv = profile_csv(profile, s0, {config});
            csv += strf("# dim_est: %.10g\n# stderr: %.10g\n", fit.slope, fit.stderr_slope);
            deliver(csv, out_path);
            if (!out_path.empty())
                std::printf("dim_est %.10g\nstderr %.10g\n", fit.slope, fit.stderr_slope);
            return 0;
        }

        if (*pindist) {
            FractalSpec spec = pin_spec.build(seed);
            StudyWindow w = window_text.empty() ? StudyWindow{depth / 2, depth}
                                                : parse_window(window_text);
            std::string config =
                strf("dyadlab pindist %s --pins %zu --depth %u --window %u:%u --seed %llu",
                     pin_spec.echo().c_str(), pins, depth, w.lo, w.hi,
                     static_cast<unsigned long long>(seed));
            maybe_echo(echo_config, config);
            PinnedStudyReport rep = pinned_distance_study(spec, pins, depth, w, seed, threads);
            deliver(pinned_study_csv(rep, {config}), out_path);
            if (!out_path.empty())
                std::printf("max_dim_est %.10g\nbound_ours %.10g\n", rep.max_estimate,
                            rep.bound_ours);
            return 0;
        }

        if (*project) {
            FractalSpec spec = proj_spec.build(seed);
            StudyWindow w = window_text.empty() ? StudyWindow{depth / 2, depth}
                                                : parse_window(window_text);
            std::string config = strf(
                "dyadlab project %s --directions %zu%s --depth %u --window %u:%u --seed %llu",
                proj_spec.echo().c_str(), directions, jitter ? " --jitter" : "", depth, w.lo,
                w.hi, static_cast<unsigned long long>(seed));
            maybe_echo(echo_config, config);
            SweepReport rep = projection_sweep(spec, directions, jitter, depth, w, seed, threads);
            deliver(sweep_csv(rep, {config}), out_path);
            if (!out_path.empty())
                std::printf("set_dim_est %.10g\nflagged %zu of %zu\n", rep.set_estimate,
                            rep.flagged_count, rep.rows.size());
            return 0;
        }

        if (*fig1) {
            std::string config = strf("dyadlab fig1 --samples %zu", samples);
            maybe_echo(echo_config, config);
            std::vector<BoundCurvePoint> points = bound_curves(interior_grid(samples));
            std::size_t violations = 0;
            for (const BoundCurvePoint& p : points)
                if (!(p.ours > p.sw && p.ours > p.fs)) ++violations;
            std::string verdict =
                violations == 0
                    ? strf("dominance: ours > max(sw, fs) at all %zu grid points", samples)
                    : strf("dominance: VIOLATED at %zu of %zu grid points", violations, samples);
            deliver(bound_curves_csv(points, {config, verdict}), out_path);
            std::printf("%s\n", verdict.c_str());
            return violations == 0 ? 0 : 1;
        }

        if (*lemma) {
            std::string config =
                strf("dyadlab lemma --trials %zu --capx %d --capv %d --seed %llu", trials, cap_x,
                     cap_v, static_cast<unsigned long long>(seed));
            maybe_echo(echo_config, config);
            LemmaStressSummary s = lemma_stress(seed, trials, cap_x, cap_v);
            if (!out_path.empty()) {
                std::string csv = "# " + config + "\n";
                csv += "instances,satisfied,skipped,counterexamples\n";
                csv += strf("%llu,%llu,%llu,%llu\n",
                            static_cast<unsigned long long>(s.instances),
                            static_cast<unsigned long long>(s.satisfied),
                            static_cast<unsigned long long>(s.skipped),
                            static_cast<unsigned long long>(s.counterexamples));
                atomic_write_file(out_path, csv);
            }
            std::printf("instances %llu\nsatisfied %llu\nskipped %llu\n%llu counterexamples\n",
                        static_cast<unsigned long long>(s.instances),
                        static_cast<unsigned long long>(s.satisfied),
                        static_cast<unsigned long long>(s.skipped),
                        static_cast<unsigned long long>(s.counterexamples));
            return s.counterexamples == 0 ? 0 : 1;
        }

        if (*annulus) {
            Vec2 c1 = parse_vec2(c1_text, "--c1");
            Vec2 c2 = parse_vec2(c2_text, "--c2");
            std::string config =
                strf("dyadlab annulus --c1 %.17g,%.17g --r1 %.17g --c2 %.17g,%.17g --r2 %.17g "
                     "--eps %.17g",
                     c1.x, c1.y, r1, c2.x, c2.y, r2, eps);
            maybe_echo(echo_config, config);
            AnnulusCoverDetails details =
                annulus_cover_details({c1, r1, eps}, {c2, r2, eps});
            std::string csv = "# " + config + "\n";
            csv += strf("# normalized: center_dist %.12g radius_gap %.12g eps %.12g scale %.12g\n",
                        details.center_dist, details.radius_gap, details.eps, details.scale);
            csv += strf("# arc_bound_turns %.12g\n# sectors %zu\n", details.arc_bound_turns,
                        details.sectors.size());
            csv += "start_turn,length_turn\n";
            for (const ArcSector& s : details.sectors)
                csv += strf("%.17g,%.17g\n", s.start_turn, s.length_turn);
            deliver(csv, out_path);
            if (!out_path.empty())
                std::printf("sectors %zu\narc_bound_turns %.12g\n", details.sectors.size(),
                            details.arc_bound_turns);
            return 0;
        }

        if (*halfinfo) {
            FractalSpec spec = half_spec.build(seed);
            if (half_angle.has_value() == !half_pin_text.empty())
                throw flag_error("halfinfo needs exactly one of --angle and --pin");
            std::string config = strf("dyadlab halfinfo %s --depth %u --coarse %u --seed %llu",
                                      half_spec.echo().c_str(), depth, coarse,
                                      static_cast<unsigned long long>(seed));
            if (half_angle) config += strf(" --angle %.17g", *half_angle);
            else config += strf(" --pin %s", half_pin_text.c_str());
            maybe_echo(echo_config, config);
            CellSet set = generate(spec, depth);
            HalfInfoRow row;
            if (half_angle) {
                row = half_information_check(set, Direction::from_turns(*half_angle), depth,
                                             coarse);
            } else {
                Vec2 pin = parse_vec2(half_pin_text, "--pin");
                row = half_information_check(set, dyadic_floor(pin, depth), depth, coarse);
            }
            std::string csv = "# " + config + "\n";
            csv += "lhs_bits,rhs_bits,slack\n";
            csv += strf("%.10g,%.10g,%.10g\n", row.lhs_bits, row.rhs_bits, row.slack);
            deliver(csv, out_path);
            if (!out_path.empty())
                std::printf("lhs_bits %.10g\nrhs_bits %.10g\nslack %.10g\n", row.lhs_bits,
                            row.rhs_bits, row.slack);
            return 0;
        }
    } catch (const flag_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
    return 0;
}
