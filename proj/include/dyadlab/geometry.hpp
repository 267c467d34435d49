#pragma once

#include <cstdint>
#include <vector>

#include "dyadlab/cellset.hpp"
#include "dyadlab/dyadic.hpp"

namespace dyadlab {

// Discretized distance and projection images, thin-annulus intersection
// covers, and point reconstruction from truncated measurements.

// Open annulus: { y : | |y - center| - radius | < thickness }.
struct Annulus {
    Vec2 center;
    double radius = 1.0;
    double thickness = 0.01;

    void check() const; // radius > 0, 0 < thickness < radius
};

// An arc on the first annulus's core circle, as an angular interval
// [start_turn, start_turn + length_turn] taken modulo 1.
struct ArcSector {
    double start_turn = 0.0;
    double length_turn = 0.0;

    bool contains_turn(double angle_turn) const;
};

constexpr int kMaxSectors = 8;

// Largest arc count and per-arc length the cover is allowed to use, and the
// constant for distance-reconstruction region diameters. Both are fixed by
// the library contract; tests pin their values.
constexpr double kDistanceRegionConstant = 64.0; // C_rec

// Per-configuration data the cover computation derives after normalization.
// Exposed for reporting; `sectors` alone is the covering answer.
struct AnnulusCoverDetails {
    std::vector<ArcSector> sectors;
    double scale = 1.0;          // normalization factor applied to lengths
    double center_dist = 0.0;    // |x1 - x2| after normalization
    double radius_gap = 0.0;     // |rho1 - rho2| after normalization
    double eps = 0.0;            // covering thickness after normalization
    double arc_bound_turns = 0.0; // per-arc length budget, in turns
};

// Covers the intersection of two thin annuli by at most kMaxSectors arcs on
// the first annulus's circle. Arc lengths are bounded by
//   2 pi rho1 eps / sqrt(max(d + dr, eps) * max(|d - dr|, eps))
// evaluated on the normalized configuration (centers translated and scaled
// into [0, 0.01]^2, radii into [0.99, 1.01], eps the larger thickness).
// Inputs that cannot be normalized raise domain_error.
AnnulusCoverDetails annulus_cover_details(const Annulus& a1, const Annulus& a2);
std::vector<ArcSector> annulus_intersection_cover(const Annulus& a1, const Annulus& a2);

// Conservative discretization of the pinned distance set
//   { |z - pin| : z in E }  at precision r <= E.precision.
// Every achievable distance lands in a returned cell; spill is at most one
// cell on each side of a cell's exact distance interval.
CellSet pinned_distance_cells(const CellSet& set, const DyadicPoint& pin, std::uint32_t r);

// Conservative discretization of the projection { <z, e> : z in E }.
CellSet projection_cells(const CellSet& set, const Direction& e, std::uint32_t r);

struct CandidateRegion {
    Vec2 center;
    double diameter = 0.0; // max pairwise distance within the region

    bool contains(Vec2 p) const;
};

struct ReconstructionRegion {
    std::vector<CandidateRegion> candidates;
    int t = 0;             // direction-separation exponent
    std::uint32_t precision = 0;

    bool contains(Vec2 p) const;
};

// Locus of points y with floor_r(<y,u>) = pu and floor_r(<y,v>) = pv: a
// parallelogram cut by two grid strips. One candidate region; its diameter is
// at most 4 * 2^(t - r) with t = ceil(-log2 min(|u-v|, |u+v|)). Nearly
// parallel directions (separation below 2^-40) are a domain error.
ReconstructionRegion reconstruct_from_projections(const Direction& u, const Direction& v,
                                                  DyadicScalar pu, DyadicScalar pv);

// Locus of points w with floor_r(|w - u|) = du and floor_r(|w - v|) = dv,
// covered by at most kMaxSectors regions of diameter at most
// kDistanceRegionConstant * 2^(2t - r). The caller asserts that the target
// point's viewing directions from u and v are at least 2^-t apart. The
// configuration must normalize (translation and power-of-two scaling) to
// |u - v| < 2^-8 with both truncated distances in (1 - 2^-7, 1 + 2^-7);
// anything else, including diameters exceeding the bound (a tangential
// configuration), is a domain error.
ReconstructionRegion reconstruct_from_distances(Vec2 u, Vec2 v, DyadicScalar du,
                                                DyadicScalar dv, int t);

} // namespace dyadlab
