#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dyadlab/cellset.hpp"

namespace dyadlab {

// Cover-counting complexity surrogates.
//
// For a finite cell set E, the number of occupied cells N_r at precision r
// plays the role of a description-length budget: bits(r) = log2 N_r. These
// counts obey exact combinatorial laws (chain rule by summation, growth of at
// most dim bits per precision step) that the tests pin down, and least-squares
// slopes of bits against r give box-counting dimension estimates.

// Occupied-cell count after coarsening to r <= E.precision.
std::uint64_t cell_count(const CellSet& set, std::uint32_t r);

// log2 of the cover count at precision r.
double surrogate_k(const CellSet& set, std::uint32_t r);

// log2 of the number of r-cells of E inside the s-cell containing x,
// for s <= r <= E.precision. x must land in an occupied s-cell.
double surrogate_k_cond(const CellSet& set, const DyadicPoint& x, std::uint32_t r,
                        std::uint32_t s);

struct ComplexityProfile {
    int dim = 2;
    std::vector<std::uint32_t> precisions; // ascending
    std::vector<std::uint64_t> counts;
    std::vector<double> bits;

    std::size_t index_of(std::uint32_t r) const; // throws parameter_error if absent
};

ComplexityProfile compute_profile(const CellSet& set, std::uint32_t r_lo, std::uint32_t r_hi);

// Profile of arbitrary per-precision scores. The callback is the extension
// point for alternative complexity estimators; compute_profile is the
// cover-count instantiation.
ComplexityProfile profile_with(const CellSet& set, std::uint32_t r_lo, std::uint32_t r_hi,
                               const std::function<double(const CellSet& coarse)>& score);

struct DimensionFit {
    double slope = 0.0;       // least-squares slope of bits against r
    double stderr_slope = 0.0;
    double min_step_slope = 0.0; // smallest single-step increment, liminf stand-in
    std::uint32_t r_lo = 0;
    std::uint32_t r_hi = 0;
    std::size_t points = 0;
};

// OLS fit of bits vs r over window [lo, hi] (at least 4 profile points).
// The slope always lands in [0, dim] because counts are monotone and gain at
// most dim bits per step.
DimensionFit dimension_estimate(const ComplexityProfile& profile, std::uint32_t lo,
                                std::uint32_t hi);

// CSV rendering: '#' metadata lines, then "r,n_cells,bits,cond_bits_vs_s0"
// where the last column is bits(r) - bits(s0) for r >= s0 and 0 below.
std::string profile_csv(const ComplexityProfile& profile, std::uint32_t s0,
                        const std::vector<std::string>& metadata);

// Shannon mutual information (bits) between the occupancy indicators of two
// same-precision cell sets over the union of their bounding boxes. Exposed as
// an exploratory statistic for translated copies of a set; it carries no
// fidelity guarantee as a conditional-complexity stand-in.
double occupancy_mutual_information(const CellSet& a, const CellSet& b);

} // namespace dyadlab
