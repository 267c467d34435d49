#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dyadlab/cellset.hpp"

namespace dyadlab {

enum class FractalKind {
    digit_cantor, // 1-D: base-2^m expansions restricted to a digit set
    product,      // 2-D: digit_cantor x digit_cantor with the same digit set
    random_tree,  // 2-D: seeded Galton-Watson subdivision with target dimension
    full_square,  // 2-D: every cell of [0,1)^2
    segment,      // 2-D: the horizontal segment [0,1) x {0}
};

struct FractalSpec {
    FractalKind kind = FractalKind::full_square;

    // digit_cantor / product parameters. The base must be a power of two;
    // digits are a nonempty strictly increasing subset of [0, base).
    std::uint32_t digit_base = 4;
    std::vector<std::uint32_t> digits = {0, 3};

    // random_tree target dimension, in [0, 2].
    double target_dim = 1.0;

    std::uint64_t seed = 0;

    int ambient_dim() const;
    // The construction's nominal dimension: log2 |digits| / m for digit sets,
    // twice that for the product, the target for random trees.
    double declared_dim() const;
    std::string describe() const;
};

// Generates the spec's cell set at precision r. Digit constructions require
// r to be a multiple of the digit width m = log2(base). Generation at a cell
// budget beyond kMaxGeneratedCells is refused.
CellSet generate(const FractalSpec& spec, std::uint32_t r);

constexpr std::uint64_t kMaxGeneratedCells = std::uint64_t(1) << 26;

// Cartesian product of two 1-D sets at equal precision.
CellSet product_set(const CellSet& a, const CellSet& b);

// k cell centers drawn uniformly with replacement, deterministically from the
// seed. Centers of cells at precision r are exact at precision r + 1.
std::vector<DyadicPoint> sample_points(const CellSet& set, std::size_t k, std::uint64_t seed);

} // namespace dyadlab
