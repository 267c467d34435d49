#pragma once

#include <stdexcept>
#include <string>

namespace dyadlab {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precision out of range, or a mantissa that no longer fits in 64 bits.
struct precision_error : error {
    using error::error;
};

// Structurally bad arguments: empty digit sets, malformed windows, size caps.
struct parameter_error : error {
    using error::error;
};

// Geometric preconditions: normalization infeasible, degenerate directions,
// points outside the set they are supposed to belong to.
struct domain_error : error {
    using error::error;
};

// File and stream failures, including malformed binary input.
struct io_error : error {
    using error::error;
};

} // namespace dyadlab
