#include "dyadlab/dyadic.hpp"

#include <string>

namespace dyadlab {

namespace {

void check_precision(std::uint32_t r) {
    if (r > kMaxPrecision)
        throw precision_error("precision " + std::to_string(r) + " exceeds maximum " +
                              std::to_string(kMaxPrecision));
}

} // namespace

DyadicScalar DyadicScalar::rescaled(std::uint32_t s) const {
    check_precision(s);
    if (s < precision)
        throw precision_error("rescale target must not be coarser than current precision");
    std::uint32_t shift = s - precision;
    // Each doubling must stay inside the mantissa range.
    std::int64_t m = mantissa;
    for (std::uint32_t i = 0; i < shift; ++i) {
        if (m >= kMaxMantissa / 2 || m <= -(kMaxMantissa / 2))
            throw precision_error("mantissa overflow while rescaling");
        m *= 2;
    }
    return {m, s};
}

DyadicScalar dyadic_floor(double x, std::uint32_t r) {
    check_precision(r);
    if (!std::isfinite(x)) throw domain_error("cannot truncate a non-finite value");
    // ldexp by an integer power of two is exact; floor of the result is the
    // true floor of x * 2^r because x itself is a binary rational.
    double scaled = std::ldexp(x, static_cast<int>(r));
    if (!(std::fabs(scaled) < static_cast<double>(kMaxMantissa)))
        throw precision_error("value out of representable range at requested precision");
    return {static_cast<std::int64_t>(std::floor(scaled)), r};
}

DyadicPoint dyadic_floor(Vec2 p, std::uint32_t r) {
    return {dyadic_floor(p.x, r), dyadic_floor(p.y, r)};
}

DyadicScalar coarsen(DyadicScalar v, std::uint32_t s) {
    if (s > v.precision)
        throw precision_error("coarsening target must not be finer than current precision");
    // Arithmetic shift floors toward -inf, matching interval nesting.
    return {v.mantissa >> (v.precision - s), s};
}

DyadicPoint coarsen(const DyadicPoint& p, std::uint32_t s) {
    return {coarsen(p.x, s), coarsen(p.y, s)};
}

Direction Direction::from_turns(double a) {
    if (!std::isfinite(a)) throw domain_error("direction angle must be finite");
    double t = a - std::floor(a);
    if (t >= 1.0) t = 0.0; // a tiny negative angle can round up to exactly 1
    return Direction{t};
}

Direction Direction::from_vector(Vec2 v) {
    if (v.x == 0.0 && v.y == 0.0) throw domain_error("zero vector has no direction");
    return from_turns(std::atan2(v.y, v.x) / (2.0 * M_PI));
}

Direction direction_between(Vec2 from, Vec2 to) {
    if (from == to) throw domain_error("direction between equal points is undefined");
    return Direction::from_vector(to - from);
}

double project(Vec2 p, const Direction& e) {
    return dot(p, e.unit());
}

} // namespace dyadlab
