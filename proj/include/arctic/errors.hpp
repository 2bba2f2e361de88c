#pragma once

#include <stdexcept>
#include <string>

namespace arctic {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A series or iteration hit its cap before meeting its tolerance.
struct convergence_error : error {
    using error::error;
};

// Input outside the region where an operation is defined (pole guards,
// strip restrictions, points off the spectral curve, ...).
struct domain_error : error {
    using error::error;
};

// A structural precondition failed while building an object
// (inconsistent boundary table, non-elliptic divisor, bad parameters).
struct construction_error : error {
    using error::error;
};

// A root bracket could not be established.
struct bracket_error : error {
    using error::error;
};

// A search found a different number of objects than required.
struct count_error : error {
    using error::error;
};

// A linear solve met a vanishing determinant.
struct degenerate_error : error {
    using error::error;
};

} // namespace arctic
