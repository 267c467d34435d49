#include "dyadlab/fractal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "dyadlab/rng.hpp"
#include "dyadlab/textio.hpp"

namespace dyadlab {

namespace {

std::uint32_t digit_width(std::uint32_t base) {
    if (base < 2 || !std::has_single_bit(base))
        throw parameter_error("digit base must be a power of two, at least 2");
    return static_cast<std::uint32_t>(std::countr_zero(base));
}

void check_digits(const FractalSpec& spec) {
    if (spec.digits.empty()) throw parameter_error("digit set must be nonempty");
    for (std::size_t i = 0; i < spec.digits.size(); ++i) {
        if (spec.digits[i] >= spec.digit_base)
            throw parameter_error("digit outside [0, base)");
        if (i > 0 && spec.digits[i - 1] >= spec.digits[i])
            throw parameter_error("digits must be strictly increasing");
    }
}

void check_budget(double cells) {
    if (cells > static_cast<double>(kMaxGeneratedCells))
        throw parameter_error("generation would exceed the cell budget");
}

// All r-bit integers whose base-2^m digit expansion uses only the allowed
// digits, in increasing order.
std::vector<std::int64_t> digit_expansion_values(const FractalSpec& spec, std::uint32_t r) {
    std::uint32_t m = digit_width(spec.digit_base);
    check_digits(spec);
    if (r % m != 0)
        throw parameter_error("precision must be a multiple of the digit width " + std::to_string(m));
    std::uint32_t levels = r / m;
    check_budget(std::pow(static_cast<double>(spec.digits.size()), static_cast<double>(levels)));

    std::vector<std::int64_t> values = {0};
    for (std::uint32_t level = 0; level < levels; ++level) {
        std::vector<std::int64_t> next;
        next.reserve(values.size() * spec.digits.size());
        for (std::int64_t v : values)
            for (std::uint32_t d : spec.digits)
                next.push_back((v << m) | d);
        values = std::move(next);
    }
    return values;
}

// Subdivision keep probability 4^(s/2 - 1), chosen so the expected child
// count per surviving cell is 2^s.
double keep_probability(double s) {
    if (!(s >= 0.0 && s <= 2.0)) throw parameter_error("target dimension must lie in [0, 2]");
    return std::exp2(s - 2.0);
}

// The child decision depends only on (seed, level, child cell), which makes
// generation at depth r and coarsening of a deeper run agree by construction.
bool tree_keeps_child(const Rng& rng, std::uint32_t level, std::int64_t cx, std::int64_t cy,
                      double p) {
    if (p >= 1.0) return true;
    if (rng.unit_at(level, std::uint64_t(cx), std::uint64_t(cy), 0) < p) return true;
    // One re-roll before the forced pick keeps expected branching close to
    // the target without letting lines die out.
    return rng.unit_at(level, std::uint64_t(cx), std::uint64_t(cy), 1) < p;
}

CellSet generate_random_tree(const FractalSpec& spec, std::uint32_t r) {
    double p = keep_probability(spec.target_dim);
    Rng rng = Rng::seeded(spec.seed).child(0x7ee5);

    CellSet set;
    set.precision = 0;
    set.dim = 2;
    set.cells = {{0, 0}};
    for (std::uint32_t level = 1; level <= r; ++level) {
        std::vector<Cell> next;
        next.reserve(set.cells.size() * 2);
        for (Cell parent : set.cells) {
            Cell child[4] = {{2 * parent.x, 2 * parent.y},
                             {2 * parent.x, 2 * parent.y + 1},
                             {2 * parent.x + 1, 2 * parent.y},
                             {2 * parent.x + 1, 2 * parent.y + 1}};
            std::size_t before = next.size();
            for (const Cell& c : child)
                if (tree_keeps_child(rng, level, c.x, c.y, p)) next.push_back(c);
            if (next.size() == before) {
                // Both rounds rejected everything: force one child so the
                // branch survives.
                std::uint64_t pick =
                    rng.at(level - 1, std::uint64_t(parent.x), std::uint64_t(parent.y), 2) & 3;
                next.push_back(child[pick]);
            }
        }
        check_budget(static_cast<double>(next.size()));
        set.cells = std::move(next);
        set.precision = level;
    }
    set.normalize();
    return set;
}

} // namespace

int FractalSpec::ambient_dim() const {
    return kind == FractalKind::digit_cantor ? 1 : 2;
}

double FractalSpec::declared_dim() const {
    switch (kind) {
    case FractalKind::digit_cantor:
    case FractalKind::product: {
        std::uint32_t m = digit_width(digit_base);
        double one = std::log2(static_cast<double>(digits.size())) / m;
        return kind == FractalKind::product ? 2.0 * one : one;
    }
    case FractalKind::random_tree: return target_dim;
    case FractalKind::full_square: return 2.0;
    case FractalKind::segment: return 1.0;
    }
    throw parameter_error("unknown fractal kind");
}

std::string FractalSpec::describe() const {
    switch (kind) {
    case FractalKind::digit_cantor:
    case FractalKind::product: {
        std::string ds;
        for (std::size_t i = 0; i < digits.size(); ++i)
            ds += (i ? "," : "") + std::to_string(digits[i]);
        return strf("kind=%s base=%u digits=%s",
                    kind == FractalKind::product ? "product" : "cantor", digit_base, ds.c_str());
    }
    case FractalKind::random_tree:
        return strf("kind=randomtree target_dim=%.10g seed=%llu", target_dim,
                    static_cast<unsigned long long>(seed));
    case FractalKind::full_square: return "kind=square";
    case FractalKind::segment: return "kind=segment";
    }
    throw parameter_error("unknown fractal kind");
}

CellSet generate(const FractalSpec& spec, std::uint32_t r) {
    if (r > kMaxPrecision) throw precision_error("generation precision out of range");

    CellSet set;
    switch (spec.kind) {
    case FractalKind::digit_cantor: {
        set.dim = 1;
        set.precision = r;
        for (std::int64_t v : digit_expansion_values(spec, r)) set.cells.push_back({v, 0});
        break;
    }
    case FractalKind::product: {
        FractalSpec line = spec;
        line.kind = FractalKind::digit_cantor;
        CellSet one = generate(line, r);
        check_budget(static_cast<double>(one.size()) * static_cast<double>(one.size()));
        return product_set(one, one);
    }
    case FractalKind::random_tree: return generate_random_tree(spec, r);
    case FractalKind::full_square: {
        if (r > 13) throw parameter_error("full square beyond precision 13 exceeds the cell budget");
        set.dim = 2;
        set.precision = r;
        std::int64_t side = std::int64_t(1) << r;
        set.cells.reserve(static_cast<std::size_t>(side * side));
        for (std::int64_t x = 0; x < side; ++x)
            for (std::int64_t y = 0; y < side; ++y) set.cells.push_back({x, y});
        break;
    }
    case FractalKind::segment: {
        if (r > 25) throw parameter_error("segment beyond precision 25 exceeds the cell budget");
        set.dim = 2;
        set.precision = r;
        std::int64_t side = std::int64_t(1) << r;
        set.cells.reserve(static_cast<std::size_t>(side));
        for (std::int64_t x = 0; x < side; ++x) set.cells.push_back({x, 0});
        break;
    }
    }
    set.normalize();
    return set;
}

CellSet product_set(const CellSet& a, const CellSet& b) {
    if (a.dim != 1 || b.dim != 1) throw parameter_error("product factors must be 1-D");
    if (a.precision != b.precision)
        throw parameter_error("product factors must share a precision");
    check_budget(static_cast<double>(a.size()) * static_cast<double>(b.size()));
    CellSet out;
    out.dim = 2;
    out.precision = a.precision;
    out.cells.reserve(a.size() * b.size());
    for (const Cell& ca : a.cells)
        for (const Cell& cb : b.cells) out.cells.push_back({ca.x, cb.x});
    // Factors are sorted, so the nested loop already emits lexicographic order.
    return out;
}

std::vector<DyadicPoint> sample_points(const CellSet& set, std::size_t k, std::uint64_t seed) {
    if (set.cells.empty()) throw parameter_error("cannot sample from an empty cell set");
    if (set.precision + 1 > kMaxPrecision)
        throw precision_error("cell centers need one extra bit of precision");
    Rng rng = Rng::seeded(seed).child(0x5a3c);
    std::vector<DyadicPoint> out;
    out.reserve(k);
    std::uint32_t rc = set.precision + 1;
    for (std::size_t i = 0; i < k; ++i) {
        const Cell& c = set.cells[rng.index_at(set.cells.size(), i)];
        out.push_back({DyadicScalar{2 * c.x + 1, rc}, DyadicScalar{set.dim == 2 ? 2 * c.y + 1 : 0, rc}});
    }
    return out;
}

} // namespace dyadlab
