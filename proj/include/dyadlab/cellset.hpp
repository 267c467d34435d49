#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dyadlab/dyadic.hpp"

namespace dyadlab {

// One grid cell at some precision r: the half-open box
//   [x * 2^-r, (x+1) * 2^-r)  x  [y * 2^-r, (y+1) * 2^-r)
// or just the first factor in ambient dimension 1 (y is kept at 0 there).
struct Cell {
    std::int64_t x = 0;
    std::int64_t y = 0;

    auto operator<=>(const Cell&) const = default;
};

// A finite set of cells at one precision, lexicographically sorted and
// duplicate-free. This is the working representation for every discretized
// set in the library.
struct CellSet {
    std::uint32_t precision = 0;
    int dim = 2; // ambient dimension, 1 or 2
    std::vector<Cell> cells;

    std::size_t size() const { return cells.size(); }
    bool contains(Cell c) const;

    // Sorts, removes duplicates, zeroes the unused coordinate in dimension 1.
    void normalize();

    // Checks the representation invariants and throws parameter_error on
    // violation. Used after deserialization and in tests.
    void check() const;
};

// Every cell mapped to its ancestor at precision s <= precision (arithmetic
// shift of each coordinate), deduplicated.
CellSet coarsen(const CellSet& set, std::uint32_t s);

// Cells shifted by an integer offset, same precision.
CellSet shifted(const CellSet& set, Cell offset);

// Binary interchange format. Layout, little-endian throughout:
//   4 bytes magic "DYCS", 1 byte version (0x01), 1 byte ambient dimension,
//   u32 precision, u64 cell count, then count cells as signed 64-bit
//   integers, one per coordinate, in lexicographic order.
// Round trips are bit-exact.
std::string serialize_dycs(const CellSet& set);
CellSet parse_dycs(std::string_view bytes);

void write_dycs(const CellSet& set, const std::string& path);
CellSet read_dycs(const std::string& path);

} // namespace dyadlab
