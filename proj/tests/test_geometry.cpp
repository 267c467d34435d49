#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dyadlab/fractal.hpp"
#include "dyadlab/geometry.hpp"
#include "dyadlab/rng.hpp"

using namespace dyadlab;

namespace {

constexpr double kTau = 2.0 * M_PI;

// Independent membership check: angular offset from the sector start, wrapped
// into [0, 1), compared against the length with a hair of slack for the
// sampling round trip.
bool in_sector(double angle_turn, const ArcSector& s) {
    double rel = angle_turn - s.start_turn;
    rel -= std::floor(rel);
    return rel <= s.length_turn + 1e-12 || rel >= 1.0 - 1e-12;
}

bool covered(double angle_turn, const std::vector<ArcSector>& sectors) {
    for (const ArcSector& s : sectors)
        if (in_sector(angle_turn, s)) return true;
    return false;
}

double floor_index(double v, std::uint32_t r) {
    return std::floor(std::ldexp(v, static_cast<int>(r)));
}

} // namespace

TEST_CASE("annulus parameter validation") {
    CHECK_THROWS_AS((Annulus{{0, 0}, -1.0, 0.1}.check()), parameter_error);
    CHECK_THROWS_AS((Annulus{{0, 0}, 1.0, 0.0}.check()), parameter_error);
    CHECK_THROWS_AS((Annulus{{0, 0}, 1.0, 1.5}.check()), parameter_error);
    CHECK_NOTHROW((Annulus{{0, 0}, 1.0, 0.25}.check()));
}

TEST_CASE("arc sector membership wraps") {
    ArcSector s{0.9, 0.2};
    CHECK(s.contains_turn(0.95));
    CHECK(s.contains_turn(0.05));
    CHECK(s.contains_turn(0.1));
    CHECK(!s.contains_turn(0.5));
    CHECK(!s.contains_turn(0.2));
    ArcSector full{0.3, 1.0};
    CHECK(full.contains_turn(0.29));
}

TEST_CASE("identical annuli give one full-circle sector") {
    Annulus a{{0.2, -0.1}, 1.0, 0.001};
    auto sectors = annulus_intersection_cover(a, a);
    REQUIRE(sectors.size() == 1);
    CHECK(sectors[0].length_turn == doctest::Approx(1.0));

    AnnulusCoverDetails details = annulus_cover_details(a, a);
    // Both max terms degenerate to the thickness, so the budget is a full turn.
    CHECK(details.arc_bound_turns == doctest::Approx(1.0));
    CHECK(details.center_dist == 0.0);
    CHECK(details.radius_gap == 0.0);
}

TEST_CASE("disjoint concentric annuli give an empty cover") {
    Annulus inner{{0, 0}, 1.0, 0.001};
    Annulus outer{{0, 0}, 1.005, 0.001};
    CHECK(annulus_intersection_cover(inner, outer).empty());
}

TEST_CASE("configurations outside the normalization band are rejected") {
    Annulus base{{0, 0}, 1.0, 0.001};
    CHECK_THROWS_AS(annulus_intersection_cover(base, Annulus{{0, 0}, 1.1, 0.001}),
                    domain_error);
    CHECK_THROWS_AS(annulus_intersection_cover(base, Annulus{{0.3, 0}, 1.0, 0.001}),
                    domain_error);
    // Scale invariance: a doubled configuration is still admissible.
    Annulus big1{{0, 0}, 2.0, 0.002}, big2{{0.012, 0}, 2.003, 0.002};
    CHECK_NOTHROW(annulus_intersection_cover(big1, big2));
}

TEST_CASE("offset equal-radius pair splits into two symmetric sectors") {
    Annulus a1{{0, 0}, 1.0, 0.0002};
    Annulus a2{{0.01, 0}, 1.0, 0.0002};
    AnnulusCoverDetails details = annulus_cover_details(a1, a2);
    REQUIRE(details.sectors.size() == 2);
    // Intersections sit near the top and bottom of the circle.
    CHECK(covered(0.25, details.sectors));
    CHECK(covered(0.75, details.sectors));
    CHECK(!covered(0.0, details.sectors));
    CHECK(!covered(0.5, details.sectors));
    double bound = details.arc_bound_turns * (1.0 + 1e-9);
    for (const ArcSector& s : details.sectors) {
        CHECK(s.length_turn > 0.0);
        CHECK(s.length_turn <= bound);
    }
}

TEST_CASE("random admissible covers: soundness, count, and length bound") {
    Rng rng = Rng::seeded(2024);
    int pairs_checked = 0, points_checked = 0;
    for (int i = 0; i < 200; ++i) {
        double rho1 = 0.995 + 0.01 * rng.unit_at(i, 0);
        double rho2 = 0.995 + 0.01 * rng.unit_at(i, 1);
        Vec2 c2{0.009 * rng.unit_at(i, 2), 0.009 * rng.unit_at(i, 3)};
        double e1 = std::exp2(-16.0 + 8.0 * rng.unit_at(i, 4));
        double e2 = std::exp2(-16.0 + 8.0 * rng.unit_at(i, 5));
        Annulus a1{{0, 0}, rho1, e1};
        Annulus a2{c2, rho2, e2};

        AnnulusCoverDetails details = annulus_cover_details(a1, a2);
        CHECK(static_cast<int>(details.sectors.size()) <= kMaxSectors);
        double bound = details.arc_bound_turns * (1.0 + 1e-9);
        for (const ArcSector& s : details.sectors) CHECK(s.length_turn <= bound);
        ++pairs_checked;

        // Rejection-sample the intersection through annulus 1's band.
        for (int j = 0; j < 3000; ++j) {
            double ang = kTau * rng.unit_at(i, 6, j);
            double rad = rho1 + e1 * (2.0 * rng.unit_at(i, 7, j) - 1.0);
            Vec2 z{rad * std::cos(ang), rad * std::sin(ang)};
            if (!(std::fabs(dist(z, c2) - rho2) < e2)) continue;
            ++points_checked;
            if (!covered(ang / kTau, details.sectors)) {
                CAPTURE(i);
                CAPTURE(ang / kTau);
                REQUIRE(false);
            }
        }
    }
    CHECK(pairs_checked == 200);
    CHECK(points_checked > 1000); // the sampler actually found intersections
}

TEST_CASE("pinned distance cells of a single far cell") {
    CellSet set;
    set.dim = 2;
    set.precision = 10;
    set.cells = {{1 << 10, 0}}; // the cell with lower corner (1, 0)
    DyadicPoint pin = dyadic_floor(Vec2{0.0, 0.0}, 10);
    for (std::uint32_t r : {4u, 7u, 10u}) {
        CellSet out = pinned_distance_cells(set, pin, r);
        out.check();
        CHECK(out.dim == 1);
        CHECK(out.precision == r);
        CHECK(out.size() <= 3);
        CHECK(out.contains({std::int64_t(1) << r, 0})); // distance 1 itself
    }
}

TEST_CASE("pinned distances of a discretized circle arc collapse") {
    // Cells along a quarter of the unit circle around the pin: every distance
    // is within O(2^-r) of 1, so the image stays a handful of cells.
    std::uint32_t p = 10;
    CellSet set;
    set.dim = 2;
    set.precision = p;
    for (int k = 0; k <= 400; ++k) {
        double th = 0.5 * M_PI * k / 400.0;
        DyadicPoint c = dyadic_floor(Vec2{std::cos(th), std::sin(th)}, p);
        set.cells.push_back({c.x.mantissa, c.y.mantissa});
    }
    set.normalize();
    DyadicPoint pin = dyadic_floor(Vec2{0.0, 0.0}, p);
    CellSet out = pinned_distance_cells(set, pin, p);
    CHECK(out.size() <= 8);
}

TEST_CASE("pinned distance cells cover every sampled distance") {
    FractalSpec tree;
    tree.kind = FractalKind::random_tree;
    tree.target_dim = 1.4;
    tree.seed = 3;
    CellSet set = generate(tree, 9);
    Rng rng = Rng::seeded(88);
    double h = std::ldexp(1.0, -static_cast<int>(set.precision));
    int idx = 0;
    for (Vec2 pv : {Vec2{-0.25, 0.375}, Vec2{0.5, 0.5}, Vec2{2.0, -1.0}}) {
        DyadicPoint pin = dyadic_floor(pv, 9);
        Vec2 p = pin.value();
        for (std::uint32_t r : {5u, 7u, 9u}) {
            CellSet out = pinned_distance_cells(set, pin, r);
            out.check();
            for (const Cell& c : set.cells) {
                for (int j = 0; j < 6; ++j) {
                    // Interior samples plus the exact lower corner.
                    double fx = j == 0 ? 0.0 : rng.unit_at(idx, j, 0);
                    double fy = j == 0 ? 0.0 : rng.unit_at(idx, j, 1);
                    Vec2 z{(double(c.x) + fx) * h, (double(c.y) + fy) * h};
                    double d = dist(z, p);
                    CHECK(out.contains({(std::int64_t)floor_index(d, r), 0}));
                }
                ++idx;
            }
            // Tightness: each image cell lies within one cell of some input
            // cell's distance interval, recomputed here from box geometry.
            double hr = std::ldexp(1.0, -static_cast<int>(r));
            for (const Cell& oc : out.cells) {
                double lo = double(oc.x) * hr, hi = lo + hr;
                bool near = false;
                for (const Cell& c : set.cells) {
                    double x0 = double(c.x) * h, y0 = double(c.y) * h;
                    double nx = std::min(std::max(p.x, x0), x0 + h) - p.x;
                    double ny = std::min(std::max(p.y, y0), y0 + h) - p.y;
                    double fxm = std::max(p.x - x0, x0 + h - p.x);
                    double fym = std::max(p.y - y0, y0 + h - p.y);
                    if (lo <= std::hypot(fxm, fym) + hr && hi >= std::hypot(nx, ny) - hr) {
                        near = true;
                        break;
                    }
                }
                CHECK(near);
            }
        }
    }

    CellSet line = generate(FractalSpec{FractalKind::digit_cantor, 4, {0, 3}}, 8);
    CHECK_THROWS_AS(pinned_distance_cells(line, dyadic_floor(Vec2{0, 0}, 8), 4),
                    parameter_error);
    CHECK_THROWS_AS(pinned_distance_cells(set, dyadic_floor(Vec2{0, 0}, 9), 10),
                    precision_error);
}

TEST_CASE("projection cells cover every sampled projection") {
    FractalSpec prod;
    prod.kind = FractalKind::product;
    prod.digit_base = 4;
    prod.digits = {0, 3};
    CellSet set = generate(prod, 8);
    double h = std::ldexp(1.0, -8);
    Rng rng = Rng::seeded(89);
    int idx = 0;
    for (double angle : {0.0, 0.125, 0.3, 0.55, 0.875}) {
        Direction e = Direction::from_turns(angle);
        for (std::uint32_t r : {4u, 6u, 8u}) {
            CellSet out = projection_cells(set, e, r);
            out.check();
            CHECK(out.dim == 1);
            for (const Cell& c : set.cells) {
                for (int j = 0; j < 4; ++j) {
                    double fx = j == 0 ? 0.0 : rng.unit_at(idx, j, 0);
                    double fy = j == 0 ? 0.0 : rng.unit_at(idx, j, 1);
                    Vec2 z{(double(c.x) + fx) * h, (double(c.y) + fy) * h};
                    double v = project(z, e);
                    CHECK(out.contains({(std::int64_t)floor_index(v, r), 0}));
                }
                ++idx;
            }
        }
    }
}

TEST_CASE("projection cell counts match the interval image") {
    // Full square: the projection image is one interval of length
    // |cos| + |sin| (in units of the square's side), so the cell count at
    // matching precision is that length in cells, within the +-1 spill.
    CellSet sq = generate(FractalSpec{FractalKind::full_square}, 8);
    for (double angle : {0.0, 0.1, 0.125, 0.25, 0.4}) {
        Direction e = Direction::from_turns(angle);
        CellSet out = projection_cells(sq, e, 8);
        Vec2 u = e.unit();
        double width = (std::fabs(u.x) + std::fabs(u.y)) * 256.0;
        CHECK(double(out.size()) >= width - 1.0);
        CHECK(double(out.size()) <= width + 3.0);
        // One interval: indices are contiguous.
        for (std::size_t i = 1; i < out.cells.size(); ++i)
            CHECK(out.cells[i].x == out.cells[i - 1].x + 1);
    }

    // Perpendicular projection of the horizontal segment: the exact image is
    // the single value 0, landing in at most the cell spill around it.
    CellSet seg = generate(FractalSpec{FractalKind::segment}, 10);
    CellSet out = projection_cells(seg, Direction::from_turns(0.25), 10);
    CHECK(out.size() <= 3);
    CHECK(out.contains({0, 0}));

    // A single cell maps to about diameter / cell width many intervals.
    CellSet one;
    one.dim = 2;
    one.precision = 6;
    one.cells = {{10, 20}};
    for (std::uint32_t r : {3u, 6u}) {
        CellSet img = projection_cells(one, Direction::from_turns(0.2), r);
        double diam_cells = std::sqrt(2.0) * std::ldexp(1.0, int(r) - 6);
        CHECK(double(img.size()) <= diam_cells + 3.0);
    }
}

TEST_CASE("orthogonal projections reconstruct the grid cell") {
    std::uint32_t r = 12;
    double h = std::ldexp(1.0, -int(r));
    Vec2 y{0.3716, 0.5289};
    Direction u = Direction::from_turns(0.0), v = Direction::from_turns(0.25);
    DyadicScalar pu = dyadic_floor(project(y, u), r);
    DyadicScalar pv = dyadic_floor(project(y, v), r);
    ReconstructionRegion region = reconstruct_from_projections(u, v, pu, pv);
    REQUIRE(region.candidates.size() == 1);
    CHECK(region.t == 0); // orthogonal directions separate maximally
    CHECK(region.precision == r);
    CHECK(region.candidates[0].diameter == doctest::Approx(std::sqrt(2.0) * h));
    CHECK(region.contains(y));
    // The region is essentially the dyadic cell of y.
    CHECK(region.candidates[0].center.x == doctest::Approx(pu.value() + 0.5 * h));
    CHECK(region.candidates[0].center.y == doctest::Approx(pv.value() + 0.5 * h));
}

TEST_CASE("projection reconstruction: soundness and diameter bound") {
    Rng rng = Rng::seeded(90);
    for (int i = 0; i < 400; ++i) {
        Vec2 y{2.0 * rng.unit_at(i, 0) - 1.0, 2.0 * rng.unit_at(i, 1) - 1.0};
        double a = rng.unit_at(i, 2);
        // Separations from wide to narrow but above the parallel cutoff.
        double gap_turn = std::exp2(-2.0 - 14.0 * rng.unit_at(i, 3));
        Direction u = Direction::from_turns(a);
        Direction v = Direction::from_turns(a + gap_turn);
        std::uint32_t r = 14 + static_cast<std::uint32_t>(rng.index_at(11, i, 4));

        DyadicScalar pu = dyadic_floor(project(y, u), r);
        DyadicScalar pv = dyadic_floor(project(y, v), r);
        ReconstructionRegion region = reconstruct_from_projections(u, v, pu, pv);
        CHECK(region.contains(y));
        REQUIRE(region.candidates.size() == 1);
        double cap = 4.0 * std::ldexp(1.0, region.t - static_cast<int>(r));
        CHECK(region.candidates[0].diameter <= cap);
    }
}

TEST_CASE("projection reconstruction rejects degenerate directions") {
    DyadicScalar p0 = dyadic_floor(0.25, 10), p1 = dyadic_floor(0.5, 10);
    Direction u = Direction::from_turns(0.1);
    CHECK_THROWS_AS(reconstruct_from_projections(u, u, p0, p1), domain_error);
    // Antiparallel is the same line.
    CHECK_THROWS_AS(reconstruct_from_projections(u, Direction::from_turns(0.6), p0, p1),
                    domain_error);
    CHECK_THROWS_AS(
        reconstruct_from_projections(u, Direction::from_turns(0.1 + 1e-14), p0, p1),
        domain_error);
    CHECK_THROWS_AS(
        reconstruct_from_projections(u, Direction::from_turns(0.3), p0, dyadic_floor(0.5, 11)),
        parameter_error);
}

TEST_CASE("projection reconstruction diameter scales with the separation") {
    // Halving the direction gap roughly doubles the parallelogram diameter.
    Vec2 y{0.2, 0.7};
    std::uint32_t r = 20;
    double prev = 0.0;
    for (int k = 3; k <= 9; ++k) {
        Direction u = Direction::from_turns(0.05);
        Direction v = Direction::from_turns(0.05 + std::exp2(-k));
        auto region = reconstruct_from_projections(u, v, dyadic_floor(project(y, u), r),
                                                   dyadic_floor(project(y, v), r));
        double diam = region.candidates[0].diameter;
        if (prev > 0.0) {
            CHECK(diam > prev * 1.5);
            CHECK(diam < prev * 2.5);
        }
        prev = diam;
    }
}

TEST_CASE("symmetric pin pair yields two mirrored distance regions") {
    Vec2 u{0, 0}, v{0.003, 0};
    // True intersection points of circles of radius about 1 around both pins
    // sit symmetrically above and below the pin axis.
    Vec2 w{0.0015, std::sqrt(1.0 - 0.0015 * 0.0015)};
    std::uint32_t r = 20;
    DyadicScalar du = dyadic_floor(dist(w, u), r);
    DyadicScalar dv = dyadic_floor(dist(w, v), r);

    double sep = dist(direction_between(u, w).unit(), direction_between(v, w).unit());
    int t = static_cast<int>(std::ceil(-std::log2(sep)));
    ReconstructionRegion region = reconstruct_from_distances(u, v, du, dv, t);
    REQUIRE(region.candidates.size() == 2);
    CHECK(region.contains(w));
    CHECK(region.contains(Vec2{w.x, -w.y}));
    CHECK(region.candidates[0].center.x ==
          doctest::Approx(region.candidates[1].center.x).epsilon(1e-6));
    CHECK(region.candidates[0].center.y ==
          doctest::Approx(-region.candidates[1].center.y).epsilon(1e-6));
    CHECK(region.candidates[0].diameter ==
          doctest::Approx(region.candidates[1].diameter).epsilon(1e-9));
}

TEST_CASE("distance reconstruction: soundness, count, and diameter bound") {
    Rng rng = Rng::seeded(91);
    int built = 0;
    for (int i = 0; i < 300; ++i) {
        Vec2 u{rng.unit_at(i, 0), rng.unit_at(i, 1)};
        int j = static_cast<int>(rng.index_at(3, i, 2)) - 1; // configuration scale 2^j
        double scale = std::ldexp(1.0, j);
        double delta_len = scale * std::exp2(-10.0 + 1.5 * rng.unit_at(i, 3));
        double delta_ang = kTau * rng.unit_at(i, 4);
        Vec2 v{u.x + delta_len * std::cos(delta_ang), u.y + delta_len * std::sin(delta_ang)};

        double dist_u = scale * (1.0 + 0.005 * (2.0 * rng.unit_at(i, 5) - 1.0));
        double point_ang = kTau * rng.unit_at(i, 6);
        Vec2 w{u.x + dist_u * std::cos(point_ang), u.y + dist_u * std::sin(point_ang)};

        std::uint32_t r = (i % 3 == 0) ? 16 : (i % 3 == 1 ? 20 : 24);
        DyadicScalar du = dyadic_floor(dist(w, u), r);
        DyadicScalar dv = dyadic_floor(dist(w, v), r);

        double sep = dist(direction_between(u, w).unit(), direction_between(v, w).unit());
        int t = static_cast<int>(std::ceil(-std::log2(sep)));

        ReconstructionRegion region = reconstruct_from_distances(u, v, du, dv, t);
        ++built;
        CHECK(region.contains(w));
        CHECK(static_cast<int>(region.candidates.size()) <= kMaxSectors);
        double cap = kDistanceRegionConstant * std::ldexp(1.0, 2 * t - static_cast<int>(r));
        for (const CandidateRegion& cand : region.candidates) CHECK(cand.diameter <= cap);
    }
    CHECK(built == 300);
}

TEST_CASE("distance reconstruction against a grid-search oracle") {
    // Every r-dyadic grid point whose truncated distances match the inputs
    // must fall in a returned region. Search a window around the band.
    Vec2 u{0, 0}, v{0.0021, 0.0013};
    Vec2 w{0.62, 0.79}; // distance about 1.003 from both pins
    std::uint32_t r = 12; // coarse so the grid search stays small
    DyadicScalar du = dyadic_floor(dist(w, u), r);
    DyadicScalar dv = dyadic_floor(dist(w, v), r);
    double sep = dist(direction_between(u, w).unit(), direction_between(v, w).unit());
    int t = static_cast<int>(std::ceil(-std::log2(sep)));
    ReconstructionRegion region = reconstruct_from_distances(u, v, du, dv, t);
    CHECK(region.contains(w));

    double h = std::ldexp(1.0, -int(r));
    std::uint64_t matched = 0, missed = 0;
    for (double x = -1.2; x <= 1.2; x += h) {
        for (double y = -1.2; y <= 1.2; y += h) {
            Vec2 z{x, y};
            if (floor_index(dist(z, u), r) != double(du.mantissa)) continue;
            if (floor_index(dist(z, v), r) != double(dv.mantissa)) continue;
            ++matched;
            if (!region.contains(z)) ++missed;
        }
    }
    CHECK(matched > 10); // the matching locus is nonempty
    CHECK(missed == 0);
}

TEST_CASE("distance reconstruction rejects inadmissible configurations") {
    std::uint32_t r = 20;
    Vec2 u{0, 0};
    DyadicScalar one = dyadic_floor(1.0001, r);

    // Pins separated beyond the normalization band.
    CHECK_THROWS_AS(reconstruct_from_distances(u, Vec2{0.01, 0}, one, one, 9), domain_error);
    // Distances that do not normalize near a power of two.
    DyadicScalar far = dyadic_floor(0.7, r);
    CHECK_THROWS_AS(reconstruct_from_distances(u, Vec2{0.002, 0}, far, far, 9), domain_error);
    // Mixed precisions and bad exponents.
    CHECK_THROWS_AS(reconstruct_from_distances(u, Vec2{0.002, 0}, one, dyadic_floor(1.0, 19), 9),
                    parameter_error);
    CHECK_THROWS_AS(reconstruct_from_distances(u, Vec2{0.002, 0}, one, one, -1),
                    parameter_error);
    DyadicScalar zero = dyadic_floor(0.0, r);
    CHECK_THROWS_AS(reconstruct_from_distances(u, Vec2{0.002, 0}, zero, one, 9), domain_error);

    // Tangential configuration: the true point sits nearly on the pin axis,
    // so the asserted separation exponent is far too small and the regions
    // blow past the diameter bound.
    Vec2 v{0.003, 0};
    Vec2 w{1.0, 1e-5};
    DyadicScalar du = dyadic_floor(dist(w, u), r);
    DyadicScalar dv = dyadic_floor(dist(w, v), r);
    CHECK_THROWS_AS(reconstruct_from_distances(u, v, du, dv, 4), domain_error);
}

TEST_CASE("distance region diameters scale with precision at fixed separation") {
    // Fixed geometry, increasing precision: diameters shrink like 2^-r.
    Vec2 u{0, 0}, v{0.0025, 0.001};
    Vec2 w{0.41, 0.92};
    double sep = dist(direction_between(u, w).unit(), direction_between(v, w).unit());
    int t = static_cast<int>(std::ceil(-std::log2(sep)));
    double prev = 0.0;
    for (std::uint32_t r : {16u, 20u, 24u}) {
        ReconstructionRegion region = reconstruct_from_distances(
            u, v, dyadic_floor(dist(w, u), r), dyadic_floor(dist(w, v), r), t);
        double dmax = 0.0;
        for (const CandidateRegion& cand : region.candidates)
            dmax = std::max(dmax, cand.diameter);
        if (prev > 0.0) {
            // Four precision bits per step: expect a factor near 16.
            CHECK(prev / dmax > 8.0);
            CHECK(prev / dmax < 32.0);
        }
        prev = dmax;
    }
}
