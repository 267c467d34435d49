#include "dyadlab/selection.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <sstream>

namespace dyadlab {

namespace {

using u128 = unsigned __int128;

constexpr std::int32_t kMaxSide = 10000;

void check_alpha(const Rational& alpha) {
    if (alpha.den <= 0 || alpha.num <= 0 || alpha.num >= alpha.den)
        throw parameter_error("alpha must be a rational strictly between 0 and 1");
}

// Intersection size of two sorted vectors.
std::uint64_t intersection_size(const std::vector<std::int32_t>& a,
                                const std::vector<std::int32_t>& b) {
    std::uint64_t n = 0;
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else { ++n; ++ia; ++ib; }
    }
    return n;
}

std::uint64_t count_witnesses(const SelectionInstance& inst, std::int32_t u, std::int32_t v) {
    const auto& nu = inst.neighborhoods[static_cast<std::size_t>(u)];
    const auto& nv = inst.neighborhoods[static_cast<std::size_t>(v)];
    std::uint64_t w = 0;
    auto ia = nu.begin(), ib = nv.begin();
    while (ia != nu.end() && ib != nv.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else {
            if (!inst.rel(*ia, u, v)) ++w;
            ++ia; ++ib;
        }
    }
    return w;
}

// Independent recount used to certify results: walks the ground set directly
// instead of merging sorted neighborhoods.
std::uint64_t recount_witnesses(const SelectionInstance& inst, std::int32_t u, std::int32_t v) {
    const auto& nu = inst.neighborhoods[static_cast<std::size_t>(u)];
    const auto& nv = inst.neighborhoods[static_cast<std::size_t>(v)];
    std::uint64_t w = 0;
    for (std::int32_t d = 0; d < inst.x_size; ++d) {
        bool in_u = std::binary_search(nu.begin(), nu.end(), d);
        bool in_v = std::binary_search(nv.begin(), nv.end(), d);
        if (in_u && in_v && !inst.rel(d, u, v)) ++w;
    }
    return w;
}

PairCertificate make_certificate(const SelectionInstance& inst, std::int32_t u, std::int32_t v,
                                 std::uint64_t witnesses) {
    PairCertificate cert;
    cert.u = u;
    cert.v = v;
    cert.witnesses = witnesses;
    cert.threshold_num = static_cast<std::uint64_t>(inst.alpha.num) *
                         static_cast<std::uint64_t>(inst.alpha.num) *
                         static_cast<std::uint64_t>(inst.x_size);
    cert.threshold_den = 2ull * static_cast<std::uint64_t>(inst.alpha.den) *
                         static_cast<std::uint64_t>(inst.alpha.den);
    return cert;
}

struct RankedPair {
    std::uint64_t shared;
    std::int32_t u, v;
};

// Ordered pairs ranked by descending shared-neighborhood size, ties in (u, v)
// order. The shared size is an upper bound on the witness count, so the scan
// can stop at the first rank that cannot qualify.
std::vector<RankedPair> ranked_pairs(const SelectionInstance& inst) {
    std::vector<RankedPair> pairs;
    pairs.reserve(static_cast<std::size_t>(inst.v_size) * static_cast<std::size_t>(inst.v_size));
    for (std::int32_t u = 0; u < inst.v_size; ++u)
        for (std::int32_t v = 0; v < inst.v_size; ++v)
            pairs.push_back({intersection_size(inst.neighborhoods[static_cast<std::size_t>(u)],
                                               inst.neighborhoods[static_cast<std::size_t>(v)]),
                             u, v});
    std::sort(pairs.begin(), pairs.end(), [](const RankedPair& a, const RankedPair& b) {
        if (a.shared != b.shared) return a.shared > b.shared;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });
    return pairs;
}

} // namespace

void SelectionInstance::check() const {
    if (x_size <= 0 || v_size <= 0) throw parameter_error("X and V must be nonempty");
    if (x_size > kMaxSide || v_size > kMaxSide)
        throw parameter_error("instance side exceeds the supported maximum");
    if (static_cast<std::int32_t>(neighborhoods.size()) != v_size)
        throw parameter_error("need exactly one neighborhood per element of V");
    check_alpha(alpha);
    for (const auto& nv : neighborhoods)
        for (std::size_t i = 0; i < nv.size(); ++i) {
            if (nv[i] < 0 || nv[i] >= x_size) throw parameter_error("neighborhood element outside X");
            if (i > 0 && nv[i - 1] >= nv[i])
                throw parameter_error("neighborhoods must be sorted and duplicate-free");
        }
    if (!rel) throw parameter_error("relation predicate is unset");
}

bool exceeds_threshold(std::uint64_t witnesses, const Rational& alpha, std::int64_t x_size) {
    check_alpha(alpha);
    u128 lhs = u128(2) * u128(alpha.den) * u128(alpha.den) * u128(witnesses);
    u128 rhs = u128(alpha.num) * u128(alpha.num) * u128(x_size);
    return lhs > rhs;
}

HypothesisCheck verify_hypotheses(const SelectionInstance& inst) {
    inst.check();
    HypothesisCheck result;

    // Density: q |N_v| >= p |X| for every v.
    for (std::int32_t v = 0; v < inst.v_size; ++v) {
        u128 lhs = u128(inst.alpha.den) * u128(inst.neighborhoods[static_cast<std::size_t>(v)].size());
        u128 rhs = u128(inst.alpha.num) * u128(inst.x_size);
        if (lhs < rhs) {
            result.ok = false;
            result.kind = HypothesisCheck::Kind::neighborhood_too_small;
            result.v = v;
            return result;
        }
    }

    // Similarity cap: 4 q^2 |{u : u ~_d v}| <= p^2 |V| for every v, d in N_v.
    for (std::int32_t v = 0; v < inst.v_size; ++v) {
        for (std::int32_t d : inst.neighborhoods[static_cast<std::size_t>(v)]) {
            std::uint64_t similar = 0;
            for (std::int32_t u = 0; u < inst.v_size; ++u)
                if (inst.rel(d, u, v)) ++similar;
            u128 lhs = u128(4) * u128(inst.alpha.den) * u128(inst.alpha.den) * u128(similar);
            u128 rhs = u128(inst.alpha.num) * u128(inst.alpha.num) * u128(inst.v_size);
            if (lhs > rhs) {
                result.ok = false;
                result.kind = HypothesisCheck::Kind::similarity_too_common;
                result.v = v;
                result.d = d;
                return result;
            }
        }
    }
    return result;
}

std::optional<PairCertificate> find_pair(const SelectionInstance& inst) {
    inst.check();
    for (const RankedPair& rp : ranked_pairs(inst)) {
        if (!exceeds_threshold(rp.shared, inst.alpha, inst.x_size))
            break; // no later pair can qualify either
        std::uint64_t w = count_witnesses(inst, rp.u, rp.v);
        if (exceeds_threshold(w, inst.alpha, inst.x_size)) {
            if (recount_witnesses(inst, rp.u, rp.v) != w)
                throw error("internal witness recount mismatch");
            return make_certificate(inst, rp.u, rp.v, w);
        }
    }
    return std::nullopt;
}

std::vector<PairCertificate> all_qualifying_pairs(const SelectionInstance& inst) {
    inst.check();
    std::vector<PairCertificate> out;
    for (std::int32_t u = 0; u < inst.v_size; ++u)
        for (std::int32_t v = 0; v < inst.v_size; ++v) {
            std::uint64_t w = count_witnesses(inst, u, v);
            if (exceeds_threshold(w, inst.alpha, inst.x_size))
                out.push_back(make_certificate(inst, u, v, w));
        }
    return out;
}

std::optional<PairCertificate> single_relation_pair(const SelectionInstance& inst) {
    inst.check();
    // Spot-check that the relation really ignores d.
    std::int32_t step = std::max(1, inst.v_size / 8);
    for (std::int32_t u = 0; u < inst.v_size; u += step)
        for (std::int32_t v = 0; v < inst.v_size; v += step) {
            bool first = inst.rel(0, u, v);
            for (std::int32_t d = 1; d < inst.x_size; d += std::max(1, inst.x_size / 4))
                if (inst.rel(d, u, v) != first)
                    throw parameter_error("relation is not independent of d");
        }

    for (const RankedPair& rp : ranked_pairs(inst)) {
        if (!exceeds_threshold(rp.shared, inst.alpha, inst.x_size)) break;
        if (!inst.rel(0, rp.u, rp.v))
            return make_certificate(inst, rp.u, rp.v, rp.shared);
    }
    return std::nullopt;
}

std::string serialize_instance(const SelectionInstance& inst) {
    inst.check();
    if (!inst.triples) throw parameter_error("cannot serialize a non-materialized relation");
    std::string out = "X " + std::to_string(inst.x_size) + " V " + std::to_string(inst.v_size) +
                      " alpha " + std::to_string(inst.alpha.num) + "/" +
                      std::to_string(inst.alpha.den) + "\n";
    for (const auto& nv : inst.neighborhoods) {
        for (std::size_t i = 0; i < nv.size(); ++i)
            out += (i ? " " : "") + std::to_string(nv[i]);
        out += "\n";
    }
    std::vector<RelationTriple> sorted = *inst.triples;
    std::sort(sorted.begin(), sorted.end());
    for (const RelationTriple& t : sorted)
        out += std::to_string(t.d) + " " + std::to_string(t.u) + " " + std::to_string(t.v) + "\n";
    return out;
}

SelectionInstance parse_instance(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) throw io_error("empty selection instance");

    SelectionInstance inst;
    {
        std::istringstream hdr(line);
        std::string kx, kv, ka, frac;
        if (!(hdr >> kx >> inst.x_size >> kv >> inst.v_size >> ka >> frac) || kx != "X" ||
            kv != "V" || ka != "alpha")
            throw io_error("malformed instance header");
        auto slash = frac.find('/');
        if (slash == std::string::npos) throw io_error("alpha must be written p/q");
        try {
            inst.alpha.num = std::stoll(frac.substr(0, slash));
            inst.alpha.den = std::stoll(frac.substr(slash + 1));
        } catch (const std::exception&) {
            throw io_error("alpha fraction is not numeric");
        }
    }
    if (inst.v_size <= 0 || inst.x_size <= 0) throw io_error("instance sides must be positive");

    for (std::int32_t v = 0; v < inst.v_size; ++v) {
        if (!std::getline(in, line)) throw io_error("missing neighborhood line");
        std::istringstream row(line);
        std::vector<std::int32_t> nv;
        std::int32_t d;
        while (row >> d) nv.push_back(d);
        inst.neighborhoods.push_back(std::move(nv));
    }

    auto triples = std::make_shared<std::set<RelationTriple>>();
    std::vector<RelationTriple> listed;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        RelationTriple t;
        if (!(row >> t.d >> t.u >> t.v)) throw io_error("malformed relation triple");
        triples->insert(t);
        listed.push_back(t);
    }
    inst.triples = std::move(listed);
    inst.rel = [triples](std::int32_t d, std::int32_t u, std::int32_t v) {
        return triples->count({d, u, v}) != 0;
    };
    inst.check();
    return inst;
}

} // namespace dyadlab
