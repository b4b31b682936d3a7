#pragma once

#include <stdexcept>
#include <string>

namespace sqmx {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape or size of an argument does not match the operation's contract.
struct DimensionError : Error {
    using Error::Error;
};

// Matrix expected to be symmetric is not, within tolerance.
struct NotSymmetricError : Error {
    using Error::Error;
};

// An iterative routine exhausted its iteration budget.
struct NoConvergenceError : Error {
    using Error::Error;
};

// Sampling rate k outside [1, n].
struct InvalidRateError : Error {
    using Error::Error;
};

// A sampled index set exceeded its size guard (|S| > 2k).
struct AbortedError : Error {
    using Error::Error;
};

struct IndexOutOfRangeError : Error {
    using Error::Error;
};

// Requested rank exceeds what the matrix dimensions admit.
struct RankError : Error {
    using Error::Error;
};

// Scalar parameter outside its admissible range (gamma, sigma, radius, ...).
struct InvalidArgumentError : Error {
    using Error::Error;
};

// Problem instance too large for a brute-force oracle.
struct TooLargeError : Error {
    using Error::Error;
};

struct NotStronglyConvexError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct NonFiniteEntryError : Error {
    using Error::Error;
};

struct RaggedRowsError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace sqmx
