#include "dyadlab/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dyadlab/textio.hpp"

namespace dyadlab {

std::uint64_t cell_count(const CellSet& set, std::uint32_t r) {
    if (r > set.precision) throw precision_error("count requested above the set's precision");
    if (r == set.precision) return set.size();
    std::uint32_t shift = set.precision - r;
    if (set.dim == 1) {
        // One shifted coordinate stays sorted, so a streaming pass counts
        // distinct ancestors without materializing them.
        std::uint64_t n = 0;
        std::int64_t prev = 0;
        bool first = true;
        for (const Cell& c : set.cells) {
            std::int64_t cx = c.x >> shift;
            if (first || cx != prev) ++n;
            prev = cx;
            first = false;
        }
        return n;
    }
    return coarsen(set, r).size();
}

double surrogate_k(const CellSet& set, std::uint32_t r) {
    std::uint64_t n = cell_count(set, r);
    if (n == 0) throw parameter_error("empty set has no cover complexity");
    return std::log2(static_cast<double>(n));
}

double surrogate_k_cond(const CellSet& set, const DyadicPoint& x, std::uint32_t r,
                        std::uint32_t s) {
    if (!(s <= r && r <= set.precision))
        throw precision_error("conditional surrogate needs s <= r <= set precision");
    if (x.precision() < s)
        throw precision_error("query point is coarser than the conditioning precision");

    DyadicPoint xs = coarsen(x, s);
    Cell target{xs.x.mantissa, set.dim == 2 ? xs.y.mantissa : 0};
    if (set.dim == 1) target.y = 0;

    std::uint32_t to_s = set.precision - s;
    std::uint32_t to_r = set.precision - r;
    std::vector<Cell> inside;
    for (const Cell& c : set.cells) {
        Cell cs{c.x >> to_s, set.dim == 2 ? (c.y >> to_s) : 0};
        if (cs != target) continue;
        inside.push_back({c.x >> to_r, set.dim == 2 ? (c.y >> to_r) : 0});
    }
    // Shifted pairs can land out of lexicographic order, so deduplicate with
    // a sort rather than a streaming comparison.
    std::sort(inside.begin(), inside.end());
    inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
    if (inside.empty()) throw domain_error("query point lies outside every occupied cell");
    return std::log2(static_cast<double>(inside.size()));
}

std::size_t ComplexityProfile::index_of(std::uint32_t r) const {
    auto it = std::lower_bound(precisions.begin(), precisions.end(), r);
    if (it == precisions.end() || *it != r)
        throw parameter_error("precision " + std::to_string(r) + " not in profile");
    return static_cast<std::size_t>(it - precisions.begin());
}

ComplexityProfile compute_profile(const CellSet& set, std::uint32_t r_lo, std::uint32_t r_hi) {
    if (r_lo > r_hi) throw parameter_error("profile window is reversed");
    if (r_hi > set.precision) throw precision_error("profile window exceeds the set's precision");

    ComplexityProfile p;
    p.dim = set.dim;
    // Walk from fine to coarse, coarsening one bit at a time so the whole
    // profile costs O(levels * n).
    CellSet current = coarsen(set, r_hi);
    for (std::uint32_t r = r_hi;; --r) {
        if (r >= r_lo) {
            p.precisions.push_back(r);
            p.counts.push_back(current.size());
            p.bits.push_back(std::log2(static_cast<double>(current.size())));
        }
        if (r == r_lo || r == 0) break;
        current = coarsen(current, r - 1);
    }
    std::reverse(p.precisions.begin(), p.precisions.end());
    std::reverse(p.counts.begin(), p.counts.end());
    std::reverse(p.bits.begin(), p.bits.end());
    return p;
}

ComplexityProfile profile_with(const CellSet& set, std::uint32_t r_lo, std::uint32_t r_hi,
                               const std::function<double(const CellSet&)>& score) {
    if (r_lo > r_hi) throw parameter_error("profile window is reversed");
    if (r_hi > set.precision) throw precision_error("profile window exceeds the set's precision");
    ComplexityProfile p;
    p.dim = set.dim;
    CellSet current = coarsen(set, r_hi);
    for (std::uint32_t r = r_hi;; --r) {
        if (r >= r_lo) {
            p.precisions.push_back(r);
            p.counts.push_back(current.size());
            p.bits.push_back(score(current));
        }
        if (r == r_lo || r == 0) break;
        current = coarsen(current, r - 1);
    }
    std::reverse(p.precisions.begin(), p.precisions.end());
    std::reverse(p.counts.begin(), p.counts.end());
    std::reverse(p.bits.begin(), p.bits.end());
    return p;
}

DimensionFit dimension_estimate(const ComplexityProfile& profile, std::uint32_t lo,
                                std::uint32_t hi) {
    if (lo >= hi) throw parameter_error("estimation window is empty");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < profile.precisions.size(); ++i) {
        std::uint32_t r = profile.precisions[i];
        if (r >= lo && r <= hi) {
            xs.push_back(static_cast<double>(r));
            ys.push_back(profile.bits[i]);
        }
    }
    std::size_t n = xs.size();
    if (n < 4) throw parameter_error("estimation window must contain at least 4 precisions");

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    double slope = sxy / sxx;
    double intercept = my - slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = ys[i] - (intercept + slope * xs[i]);
        ss_res += e * e;
    }
    double se = n > 2 ? std::sqrt(ss_res / (static_cast<double>(n - 2) * sxx)) : 0.0;

    double min_step = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < n; ++i)
        min_step = std::min(min_step, (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]));
    if (n < 2) min_step = 0.0;

    DimensionFit fit;
    fit.slope = slope;
    fit.stderr_slope = se;
    fit.min_step_slope = min_step;
    fit.r_lo = static_cast<std::uint32_t>(xs.front());
    fit.r_hi = static_cast<std::uint32_t>(xs.back());
    fit.points = n;
    return fit;
}

std::string profile_csv(const ComplexityProfile& profile, std::uint32_t s0,
                        const std::vector<std::string>& metadata) {
    std::string out;
    for (const std::string& line : metadata) out += "# " + line + "\n";
    out += strf("# s0: %u\n", s0);
    out += "r,n_cells,bits,cond_bits_vs_s0\n";
    double bits_s0 = 0.0;
    bool have_s0 = false;
    for (std::size_t i = 0; i < profile.precisions.size(); ++i) {
        if (profile.precisions[i] == s0) {
            bits_s0 = profile.bits[i];
            have_s0 = true;
        }
    }
    for (std::size_t i = 0; i < profile.precisions.size(); ++i) {
        double cond = have_s0 && profile.precisions[i] > s0 ? profile.bits[i] - bits_s0 : 0.0;
        out += strf("%u,%llu,%.10g,%.10g\n", profile.precisions[i],
                    static_cast<unsigned long long>(profile.counts[i]), profile.bits[i], cond);
    }
    return out;
}

double occupancy_mutual_information(const CellSet& a, const CellSet& b) {
    if (a.precision != b.precision)
        throw parameter_error("mutual information needs equal precisions");
    if (a.cells.empty() || b.cells.empty())
        throw parameter_error("mutual information of an empty set is undefined");

    auto box = [](const CellSet& s, Cell& lo, Cell& hi) {
        lo = hi = s.cells.front();
        for (const Cell& c : s.cells) {
            lo.x = std::min(lo.x, c.x);
            lo.y = std::min(lo.y, c.y);
            hi.x = std::max(hi.x, c.x);
            hi.y = std::max(hi.y, c.y);
        }
    };
    Cell alo, ahi, blo, bhi;
    box(a, alo, ahi);
    box(b, blo, bhi);
    Cell lo{std::min(alo.x, blo.x), std::min(alo.y, blo.y)};
    Cell hi{std::max(ahi.x, bhi.x), std::max(ahi.y, bhi.y)};
    double total = static_cast<double>(hi.x - lo.x + 1) * static_cast<double>(hi.y - lo.y + 1);

    std::uint64_t joint11 = 0;
    for (const Cell& c : a.cells)
        if (b.contains(c)) ++joint11;
    double p1a = static_cast<double>(a.size()) / total;
    double p1b = static_cast<double>(b.size()) / total;
    double p11 = static_cast<double>(joint11) / total;
    double p10 = p1a - p11;
    double p01 = p1b - p11;
    double p00 = 1.0 - p1a - p1b + p11;

    auto term = [](double pxy, double px, double py) {
        if (pxy <= 0.0 || px <= 0.0 || py <= 0.0) return 0.0;
        return pxy * std::log2(pxy / (px * py));
    };
    return term(p11, p1a, p1b) + term(p10, p1a, 1.0 - p1b) + term(p01, 1.0 - p1a, p1b) +
           term(p00, 1.0 - p1a, 1.0 - p1b);
}

} // namespace dyadlab
