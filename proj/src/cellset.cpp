#include "dyadlab/cellset.hpp"

#include <algorithm>
#include <cstring>

#include "dyadlab/textio.hpp"

namespace dyadlab {

bool CellSet::contains(Cell c) const {
    return std::binary_search(cells.begin(), cells.end(), c);
}

void CellSet::normalize() {
    if (dim == 1)
        for (Cell& c : cells) c.y = 0;
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
}

void CellSet::check() const {
    if (dim != 1 && dim != 2) throw parameter_error("ambient dimension must be 1 or 2");
    if (precision > kMaxPrecision) throw parameter_error("cell set precision out of range");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (dim == 1 && cells[i].y != 0)
            throw parameter_error("1-D cell set with nonzero second coordinate");
        if (i > 0 && !(cells[i - 1] < cells[i]))
            throw parameter_error("cells not in strictly increasing lexicographic order");
    }
}

CellSet coarsen(const CellSet& set, std::uint32_t s) {
    if (s > set.precision)
        throw precision_error("coarsening target exceeds the set's precision");
    if (s == set.precision) return set;
    std::uint32_t shift = set.precision - s;
    CellSet out;
    out.precision = s;
    out.dim = set.dim;
    out.cells.reserve(set.cells.size());
    for (Cell c : set.cells)
        out.cells.push_back({c.x >> shift, set.dim == 2 ? (c.y >> shift) : 0});
    if (set.dim == 1) {
        // A single shifted coordinate stays sorted, so duplicates are adjacent.
        out.cells.erase(std::unique(out.cells.begin(), out.cells.end()), out.cells.end());
    } else {
        // Lexicographic order does not survive shifting both coordinates:
        // (0,3) < (1,0) but their one-bit ancestors compare the other way.
        std::sort(out.cells.begin(), out.cells.end());
        out.cells.erase(std::unique(out.cells.begin(), out.cells.end()), out.cells.end());
    }
    return out;
}

CellSet shifted(const CellSet& set, Cell offset) {
    CellSet out = set;
    for (Cell& c : out.cells) {
        c.x += offset.x;
        if (set.dim == 2) c.y += offset.y;
    }
    return out;
}

namespace {

constexpr char kMagic[4] = {'D', 'Y', 'C', 'S'};
constexpr unsigned char kVersion = 0x01;

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_i64(std::string& out, std::int64_t v) {
    put_u64(out, static_cast<std::uint64_t>(v));
}

struct Reader {
    const unsigned char* p;
    std::size_t left;

    void need(std::size_t n) const {
        if (left < n) throw io_error("truncated cell set data");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[i]) << (8 * i);
        p += 4;
        left -= 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
        p += 8;
        left -= 8;
        return v;
    }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
};

} // namespace

std::string serialize_dycs(const CellSet& set) {
    set.check();
    std::string out;
    out.reserve(18 + set.cells.size() * 8 * static_cast<std::size_t>(set.dim));
    out.append(kMagic, 4);
    out.push_back(static_cast<char>(kVersion));
    out.push_back(static_cast<char>(set.dim));
    put_u32(out, set.precision);
    put_u64(out, set.cells.size());
    for (const Cell& c : set.cells) {
        put_i64(out, c.x);
        if (set.dim == 2) put_i64(out, c.y);
    }
    return out;
}

CellSet parse_dycs(std::string_view bytes) {
    Reader r{reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()};
    r.need(6);
    if (std::memcmp(r.p, kMagic, 4) != 0) throw io_error("bad magic, not a DYCS file");
    unsigned char version = r.p[4];
    unsigned char dim = r.p[5];
    r.p += 6;
    r.left -= 6;
    if (version != kVersion) throw io_error("unsupported DYCS version");
    if (dim != 1 && dim != 2) throw io_error("bad ambient dimension in DYCS header");

    CellSet set;
    set.dim = dim;
    set.precision = r.u32();
    std::uint64_t count = r.u64();
    if (count > (std::uint64_t(1) << 32)) throw io_error("implausible cell count");
    if (r.left != count * 8u * dim) throw io_error("cell payload size mismatch");
    set.cells.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        Cell c;
        c.x = r.i64();
        c.y = dim == 2 ? r.i64() : 0;
        set.cells.push_back(c);
    }
    try {
        set.check(); // enforces sortedness and uniqueness on the wire format too
    } catch (const parameter_error& e) {
        throw io_error(e.what());
    }
    return set;
}

void write_dycs(const CellSet& set, const std::string& path) {
    atomic_write_file(path, serialize_dycs(set));
}

CellSet read_dycs(const std::string& path) {
    return parse_dycs(read_file(path));
}

} // namespace dyadlab
