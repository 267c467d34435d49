#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dyadlab/errors.hpp"

namespace dyadlab {

// Double-counting pair selection.
//
// Given a ground set X, a family V where each v carries a neighborhood
// N_v of X with |N_v| >= alpha |X|, and per-element similarity relations
// ~_d on V with |{u : u ~_d v}| <= (alpha^2/4)|V| for every v and d in N_v,
// some pair u, v shares more than (alpha^2/2)|X| elements d of N_u cap N_v
// with u not~_d v. The engine searches for such a pair and certifies it by
// direct recount. All threshold comparisons are exact integer arithmetic on
// the rational alpha; no floating point is involved in any verdict.

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

using RelationFn = std::function<bool(std::int32_t d, std::int32_t u, std::int32_t v)>;

struct RelationTriple {
    std::int32_t d = 0, u = 0, v = 0;
    auto operator<=>(const RelationTriple&) const = default;
};

struct SelectionInstance {
    std::int32_t x_size = 0;
    std::int32_t v_size = 0;
    std::vector<std::vector<std::int32_t>> neighborhoods; // per v, sorted unique
    Rational alpha; // strictly between 0 and 1
    RelationFn rel;

    // Set when the relation was materialized (text interchange); used by
    // serialization.
    std::optional<std::vector<RelationTriple>> triples;

    void check() const; // shape invariants, throws parameter_error
};

struct HypothesisCheck {
    bool ok = true;
    // On failure, which hypothesis broke and where.
    enum class Kind { none, neighborhood_too_small, similarity_too_common } kind = Kind::none;
    std::int32_t v = -1;
    std::int32_t d = -1;
};

struct PairCertificate {
    std::int32_t u = -1;
    std::int32_t v = -1;
    std::uint64_t witnesses = 0; // |{ d in N_u cap N_v : u not~_d v }|
    // The strict threshold witnesses must exceed: alpha^2/2 |X| as the exact
    // fraction threshold_num / threshold_den.
    std::uint64_t threshold_num = 0;
    std::uint64_t threshold_den = 1;
};

// Exceedance test 2 q^2 w > p^2 |X|, done in 128-bit integers.
bool exceeds_threshold(std::uint64_t witnesses, const Rational& alpha, std::int64_t x_size);

HypothesisCheck verify_hypotheses(const SelectionInstance& inst);

// First qualifying pair in the search order: ordered pairs (u, v) enumerated
// by descending |N_u cap N_v|, ties by (u, v); the scan short-circuits once
// intersections are too small to beat the threshold. Every returned
// certificate is re-verified by a direct recount before being handed back.
std::optional<PairCertificate> find_pair(const SelectionInstance& inst);

// All qualifying ordered pairs, for cross-checking against brute force.
std::vector<PairCertificate> all_qualifying_pairs(const SelectionInstance& inst);

// Variant for a single d-independent relation: a pair with u not~ v and
// |N_u cap N_v| > (alpha^2/2)|X|. d-independence is spot-checked on a sample
// of triples; violations are a parameter_error.
std::optional<PairCertificate> single_relation_pair(const SelectionInstance& inst);

// Text interchange: header "X <n> V <m> alpha <p>/<q>", one line per v with
// the sorted elements of N_v (blank line for empty), then zero or more
// relation triples "d u v", one per line; listed means related. Parsing
// materializes the triples; serializing requires them.
std::string serialize_instance(const SelectionInstance& inst);
SelectionInstance parse_instance(std::string_view text);

} // namespace dyadlab
