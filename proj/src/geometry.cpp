#include "dyadlab/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace dyadlab {

namespace {

constexpr double kTau = 2.0 * M_PI;

double floor_index(double v, std::uint32_t r) {
    return std::floor(std::ldexp(v, static_cast<int>(r)));
}

// Appends the 1-D cells hit by the closed value interval [lo, hi], widened by
// a few ulps so that float rounding at cell boundaries can only add a cell,
// never lose one.
void append_interval_cells(std::vector<Cell>& out, double lo, double hi, std::uint32_t r) {
    lo = std::nextafter(std::nextafter(lo, -1e300), -1e300);
    hi = std::nextafter(std::nextafter(hi, 1e300), 1e300);
    double klo = floor_index(lo, r);
    double khi = floor_index(hi, r);
    if (!(std::fabs(klo) < 9.0e18 && std::fabs(khi) < 9.0e18))
        throw precision_error("interval index out of range");
    for (std::int64_t k = static_cast<std::int64_t>(klo); k <= static_cast<std::int64_t>(khi); ++k)
        out.push_back({k, 0});
}

} // namespace

void Annulus::check() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw parameter_error("annulus radius must be positive");
    if (!(thickness > 0.0) || !(thickness < radius))
        throw parameter_error("annulus thickness must lie in (0, radius)");
    if (!std::isfinite(center.x) || !std::isfinite(center.y))
        throw parameter_error("annulus center must be finite");
}

bool ArcSector::contains_turn(double angle_turn) const {
    double rel = angle_turn - start_turn;
    rel -= std::floor(rel);
    return rel <= length_turn;
}

CellSet pinned_distance_cells(const CellSet& set, const DyadicPoint& pin, std::uint32_t r) {
    if (set.dim != 2) throw parameter_error("pinned distances need a planar set");
    if (r > set.precision) throw precision_error("output precision exceeds the set's precision");

    CellSet coarse = coarsen(set, r);
    double h = std::ldexp(1.0, -static_cast<int>(r));
    Vec2 p = pin.value();

    CellSet out;
    out.dim = 1;
    out.precision = r;
    out.cells.reserve(coarse.size() * 2);
    for (const Cell& c : coarse.cells) {
        double x0 = static_cast<double>(c.x) * h, x1 = x0 + h;
        double y0 = static_cast<double>(c.y) * h, y1 = y0 + h;
        // Nearest point of the closed box via clamping; farthest is a corner.
        double nx = std::min(std::max(p.x, x0), x1) - p.x;
        double ny = std::min(std::max(p.y, y0), y1) - p.y;
        double fx = std::max(p.x - x0, x1 - p.x);
        double fy = std::max(p.y - y0, y1 - p.y);
        double dmin = std::sqrt(nx * nx + ny * ny);
        double dmax = std::sqrt(fx * fx + fy * fy);
        append_interval_cells(out.cells, dmin, dmax, r);
    }
    out.normalize();
    return out;
}

CellSet projection_cells(const CellSet& set, const Direction& e, std::uint32_t r) {
    if (set.dim != 2) throw parameter_error("projections need a planar set");
    if (r > set.precision) throw precision_error("output precision exceeds the set's precision");

    CellSet coarse = coarsen(set, r);
    double h = std::ldexp(1.0, -static_cast<int>(r));
    Vec2 u = e.unit();
    // Over a box, <z,u> ranges between the corner combinations picked by the
    // signs of u's components.
    double sx = u.x >= 0 ? h * u.x : 0.0, tx = u.x >= 0 ? 0.0 : h * u.x;
    double sy = u.y >= 0 ? h * u.y : 0.0, ty = u.y >= 0 ? 0.0 : h * u.y;

    CellSet out;
    out.dim = 1;
    out.precision = r;
    out.cells.reserve(coarse.size() * 2);
    for (const Cell& c : coarse.cells) {
        double base = (static_cast<double>(c.x) * u.x + static_cast<double>(c.y) * u.y) * h;
        append_interval_cells(out.cells, base + tx + ty, base + sx + sy, r);
    }
    out.normalize();
    return out;
}

namespace {

// Angular footprint of the intersection on annulus 1's circle, after
// normalization. For an angle offset delta from the direction of the second
// center, the distance from the second center to the radial segment of
// annulus 1 grows monotonically in both the radius and |delta|, so the
// footprint in |delta| is a single interval [delta_lo, delta_hi] given by two
// closed-form arccosines.
struct Footprint {
    bool empty = true;
    bool full_circle = false;
    double phi0 = 0.0;     // direction toward the second center, in turns
    double delta_lo = 0.0; // interval of |delta|, in turns
    double delta_hi = 0.0;
};

Footprint intersection_footprint(Vec2 c1, double rho1, double w1, Vec2 c2, double rho2,
                                 double w2) {
    Footprint fp;
    double d = dist(c1, c2);
    double rlo = rho1 - w1, rhi = rho1 + w1;

    if (d < 1e-14) {
        // Concentric within noise: either the radial bands overlap on every
        // ray (full circle) or nowhere.
        if (rlo <= rho2 + w2 + d && rhi >= rho2 - w2 - d) {
            fp.empty = false;
            fp.full_circle = true;
        }
        return fp;
    }

    // min over the radial band of |point - c2| is at the inner radius, max at
    // the outer. Valid because d < rlo; enforce it rather than assume it.
    if (rlo <= 2.0 * d)
        throw domain_error("annulus band too thick relative to the center separation");
    double ca = (rlo * rlo + d * d - (rho2 + w2) * (rho2 + w2)) / (2.0 * rlo * d);
    double cb = (rhi * rhi + d * d - (rho2 - w2) * (rho2 - w2)) / (2.0 * rhi * d);
    if (ca > 1.0 || cb < -1.0) return fp; // near side too far, or far side too near

    double delta_hi = ca < -1.0 ? M_PI : std::acos(ca);
    double delta_lo = cb > 1.0 ? 0.0 : std::acos(cb);
    if (delta_lo > delta_hi) return fp;

    fp.empty = false;
    fp.phi0 = std::atan2(c2.y - c1.y, c2.x - c1.x) / kTau;
    fp.delta_lo = delta_lo / kTau;
    fp.delta_hi = delta_hi / kTau;
    fp.full_circle = fp.delta_lo == 0.0 && delta_hi == M_PI;
    return fp;
}

// Circular intervals [start, start + length] covering the footprint.
std::vector<ArcSector> footprint_components(const Footprint& fp) {
    if (fp.empty) return {};
    if (fp.full_circle) return {{0.0, 1.0}};
    if (fp.delta_lo == 0.0) return {{fp.phi0 - fp.delta_hi, 2.0 * fp.delta_hi}};
    if (fp.delta_hi >= 0.5) {
        // The two mirror intervals meet at the antipode.
        return {{fp.phi0 + fp.delta_lo, 1.0 - 2.0 * fp.delta_lo}};
    }
    return {{fp.phi0 - fp.delta_hi, fp.delta_hi - fp.delta_lo},
            {fp.phi0 + fp.delta_lo, fp.delta_hi - fp.delta_lo}};
}

double wrap_turn(double a) {
    double t = a - std::floor(a);
    return t >= 1.0 ? 0.0 : t;
}

// Splits components into arcs no longer than bound_turns, with a hair of
// margin at each component end so sampled boundary points cannot escape by
// one float rounding. The margin is budgeted inside the allowed 1e-9
// relative slack on the bound.
std::vector<ArcSector> split_components(const std::vector<ArcSector>& components,
                                        double bound_turns) {
    double margin = std::min(1e-13, bound_turns * 1e-10);
    std::vector<ArcSector> out;
    for (const ArcSector& comp : components) {
        double start = comp.start_turn - margin;
        double len = std::min(comp.length_turn + 2.0 * margin, 1.0);
        int pieces = std::max(1, static_cast<int>(std::ceil(len / (bound_turns * (1.0 + 2e-10)))));
        double piece = len / pieces;
        for (int i = 0; i < pieces; ++i)
            out.push_back({wrap_turn(start + piece * i), piece});
    }
    return out;
}

} // namespace

AnnulusCoverDetails annulus_cover_details(const Annulus& a1, const Annulus& a2) {
    a1.check();
    a2.check();

    // Normalize: one uniform scale brings both radii into [0.99, 1.01], a
    // translation puts both centers into [0, 0.01]^2. Angles are unaffected.
    double scale = 2.0 / (a1.radius + a2.radius);
    double rho1 = scale * a1.radius, rho2 = scale * a2.radius;
    if (!(rho1 >= 0.99 && rho1 <= 1.01 && rho2 >= 0.99 && rho2 <= 1.01))
        throw domain_error("annulus radii too far apart to normalize");
    Vec2 delta = {scale * (a2.center.x - a1.center.x), scale * (a2.center.y - a1.center.y)};
    if (!(std::fabs(delta.x) <= 0.01 && std::fabs(delta.y) <= 0.01))
        throw domain_error("annulus centers too far apart to normalize");
    double w1 = scale * a1.thickness, w2 = scale * a2.thickness;

    AnnulusCoverDetails details;
    details.scale = scale;
    details.center_dist = norm(delta);
    details.radius_gap = std::fabs(rho1 - rho2);
    details.eps = std::max(w1, w2);

    double term_sum = std::max(details.center_dist + details.radius_gap, details.eps);
    double term_diff = std::max(std::fabs(details.center_dist - details.radius_gap), details.eps);
    details.arc_bound_turns = std::min(1.0, details.eps / std::sqrt(term_sum * term_diff));

    Footprint fp = intersection_footprint({0, 0}, rho1, w1, delta, rho2, w2);
    details.sectors = split_components(footprint_components(fp), details.arc_bound_turns);
    if (static_cast<int>(details.sectors.size()) > kMaxSectors)
        throw domain_error("annulus cover needed more sectors than the contract allows");
    return details;
}

std::vector<ArcSector> annulus_intersection_cover(const Annulus& a1, const Annulus& a2) {
    return annulus_cover_details(a1, a2).sectors;
}

bool CandidateRegion::contains(Vec2 p) const {
    return dist(p, center) <= diameter * (1.0 + 1e-12) + 1e-300;
}

bool ReconstructionRegion::contains(Vec2 p) const {
    for (const CandidateRegion& c : candidates)
        if (c.contains(p)) return true;
    return false;
}

namespace {

int separation_exponent(double m) {
    return static_cast<int>(std::ceil(-std::log2(m)));
}

} // namespace

ReconstructionRegion reconstruct_from_projections(const Direction& u, const Direction& v,
                                                  DyadicScalar pu, DyadicScalar pv) {
    if (pu.precision != pv.precision)
        throw parameter_error("projection truncations must share a precision");
    Vec2 eu = u.unit(), ev = v.unit();
    double sep = std::min(dist(eu, ev), norm(eu + ev));
    if (sep < std::ldexp(1.0, -40))
        throw domain_error("directions are too close to parallel to reconstruct");

    std::uint32_t r = pu.precision;
    double h = std::ldexp(1.0, -static_cast<int>(r));
    double a0 = pu.value(), b0 = pv.value();
    double det = cross(eu, ev);

    // Vertices of { y : <y,u> in [a0, a0+h], <y,v> in [b0, b0+h] }.
    Vec2 corner[4];
    int k = 0;
    for (double a : {a0, a0 + h})
        for (double b : {b0, b0 + h})
            corner[k++] = {(a * ev.y - b * eu.y) / det, (b * eu.x - a * ev.x) / det};
    double diam = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) diam = std::max(diam, dist(corner[i], corner[j]));

    ReconstructionRegion region;
    region.precision = r;
    region.t = separation_exponent(sep);
    region.candidates = {{0.25 * (corner[0] + corner[1] + corner[2] + corner[3]), diam}};
    return region;
}

ReconstructionRegion reconstruct_from_distances(Vec2 u, Vec2 v, DyadicScalar du,
                                                DyadicScalar dv, int t) {
    if (du.precision != dv.precision)
        throw parameter_error("distance truncations must share a precision");
    if (t < 0) throw parameter_error("separation exponent must be nonnegative");
    std::uint32_t r = du.precision;
    if (du.mantissa <= 0 || dv.mantissa <= 0)
        throw domain_error("truncated distances must be positive");

    // Normalize by a power-of-two scale (exact on dyadic data): pick k with
    // 2^k * du closest to 1, then require the whole configuration to land in
    // the band the covering analysis needs.
    double du_val = du.value(), dv_val = dv.value();
    int k = static_cast<int>(std::lround(-std::log2(du_val)));
    double s = std::ldexp(1.0, k);
    double ru = s * du_val, rv = s * dv_val;
    double band = std::ldexp(1.0, -7);
    if (!(ru > 1.0 - band && ru < 1.0 + band && rv > 1.0 - band && rv < 1.0 + band))
        throw domain_error("truncated distances do not normalize into the unit band");
    Vec2 dv2 = {s * (v.x - u.x), s * (v.y - u.y)};
    if (!(norm(dv2) < std::ldexp(1.0, -8)))
        throw domain_error("pins too far apart to normalize");

    // Scaled half-open distance bands as closed annuli around each pin.
    double h = std::ldexp(1.0, -static_cast<int>(r)) * s;
    double rho_u = ru + 0.5 * h, w_u = 0.5 * h;
    double rho_v = rv + 0.5 * h, w_v = 0.5 * h;

    Footprint fp = intersection_footprint({0, 0}, rho_u, w_u, dv2, rho_v, w_v);

    double eps = std::max(w_u, w_v);
    double d = norm(dv2), gap = std::fabs(rho_u - rho_v);
    double bound_turns = std::min(
        1.0, eps / std::sqrt(std::max(d + gap, eps) * std::max(std::fabs(d - gap), eps)));
    std::vector<ArcSector> sectors = split_components(footprint_components(fp), bound_turns);
    if (static_cast<int>(sectors.size()) > kMaxSectors)
        throw domain_error("distance bands intersect too broadly; configuration inadmissible");

    double diameter_cap = kDistanceRegionConstant * std::ldexp(1.0, 2 * t - static_cast<int>(r));

    ReconstructionRegion region;
    region.precision = r;
    region.t = t;
    for (const ArcSector& arc : sectors) {
        // Polar box around u (normalized frame): radius in [rho_u - w_u,
        // rho_u + w_u], angle in the arc. Its diameter is realized between
        // corners; the chord formula below evaluates all corner pairs.
        double half_angle = M_PI * arc.length_turn; // half the spanned angle, radians
        double rin = rho_u - w_u, rout = rho_u + w_u;
        double chord_out = 2.0 * rout * std::sin(std::min(half_angle, 0.5 * M_PI));
        double cosang = std::cos(std::min(2.0 * half_angle, M_PI));
        double cross_pair = std::sqrt(std::max(0.0, rin * rin + rout * rout - 2.0 * rin * rout * cosang));
        double diam_norm = std::max({chord_out, cross_pair, 2.0 * w_u});

        double mid = kTau * (arc.start_turn + 0.5 * arc.length_turn);
        Vec2 center_norm = {rho_u * std::cos(mid), rho_u * std::sin(mid)};
        CandidateRegion cand;
        cand.center = {u.x + center_norm.x / s, u.y + center_norm.y / s};
        cand.diameter = diam_norm / s;
        if (!(cand.diameter <= diameter_cap))
            throw domain_error("region diameter exceeds the separation bound; "
                               "asserted direction separation does not hold");
        region.candidates.push_back(cand);
    }
    return region;
}

} // namespace dyadlab
