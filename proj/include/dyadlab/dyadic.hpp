#pragma once

#include <cmath>
#include <cstdint>

#include "dyadlab/errors.hpp"

namespace dyadlab {

// Exact dyadic-grid arithmetic.
//
// A DyadicScalar holds mantissa * 2^-precision with the mantissa kept as a
// 64-bit integer, so grid values, truncations and coarsenings are exact
// integer operations. Doubles only enter at the boundary: a double is itself
// a binary rational, and scaling it by 2^r is exact, so dyadic_floor of a
// double is the true mathematical floor of that input value.

constexpr std::uint32_t kMaxPrecision = 60;

// Mantissas stay below 2^62, which covers coordinates in [-4, 4] at the
// maximum precision and leaves headroom for one doubling.
constexpr std::int64_t kMaxMantissa = std::int64_t(1) << 62;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

struct DyadicScalar {
    std::int64_t mantissa = 0;
    std::uint32_t precision = 0;

    // Exact when the mantissa fits in a double's 53 significand bits, which
    // holds everywhere this library constructs values at precision <= 52.
    double value() const { return std::ldexp(static_cast<double>(mantissa), -static_cast<int>(precision)); }

    // Same value re-expressed on the finer grid 2^-s, s >= precision.
    DyadicScalar rescaled(std::uint32_t s) const;

    // Exact cross-precision value comparison.
    friend bool operator==(DyadicScalar a, DyadicScalar b) {
        if (a.precision == b.precision) return a.mantissa == b.mantissa;
        using i128 = __int128;
        int shift_a = static_cast<int>(b.precision > a.precision ? b.precision - a.precision : 0);
        int shift_b = static_cast<int>(a.precision > b.precision ? a.precision - b.precision : 0);
        return (i128(a.mantissa) << shift_a) == (i128(b.mantissa) << shift_b);
    }
};

struct DyadicPoint {
    DyadicScalar x;
    DyadicScalar y;

    std::uint32_t precision() const { return x.precision; }
    Vec2 value() const { return {x.value(), y.value()}; }

    friend bool operator==(const DyadicPoint& a, const DyadicPoint& b) {
        return a.x == b.x && a.y == b.y;
    }
};

// A direction on the unit circle, stored as its angle in turns, in [0, 1).
struct Direction {
    double angle = 0.0;

    static Direction from_turns(double a);
    // Direction of a nonzero vector. Zero vector is a domain error.
    static Direction from_vector(Vec2 v);

    Vec2 unit() const {
        double rad = 2.0 * M_PI * angle;
        return {std::cos(rad), std::sin(rad)};
    }
};

// floor(x * 2^r) / 2^r. Throws precision_error when r > kMaxPrecision or the
// scaled value leaves the mantissa range; non-finite input is a domain error.
DyadicScalar dyadic_floor(double x, std::uint32_t r);
DyadicPoint dyadic_floor(Vec2 p, std::uint32_t r);

// Coarsening to s <= precision. Exact: agrees with flooring the original
// value directly at precision s.
DyadicScalar coarsen(DyadicScalar v, std::uint32_t s);
DyadicPoint coarsen(const DyadicPoint& p, std::uint32_t s);

// Direction of the vector from `from` to `to`. Equal points are a domain error.
Direction direction_between(Vec2 from, Vec2 to);

// Signed scalar projection of p onto the direction's unit vector.
double project(Vec2 p, const Direction& e);

} // namespace dyadlab
