#pragma once

#include <stdexcept>

namespace tvaudit {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A year lies outside the configured bin domain.
struct OutOfDomainYear : Error {
    using Error::Error;
};

// A bin count or record count is negative.
struct NegativeCount : Error {
    using Error::Error;
};

// Fewer points than the fit requires.
struct InsufficientPoints : Error {
    using Error::Error;
};

// Normal matrix is rank deficient within tolerance.
struct SingularSystem : Error {
    using Error::Error;
};

// Operation requires at least one record in the histogram.
struct EmptyHistogram : Error {
    using Error::Error;
};

// Reference histogram for resampling carries no mass.
struct EmptyReference : Error {
    using Error::Error;
};

// Reference standard deviation is zero; the normalized score is undefined.
struct ZeroSigma : Error {
    using Error::Error;
};

// Reference statistics were computed for a different subset size.
struct SizeMismatch : Error {
    using Error::Error;
};

// Renormalization model predicts a nonpositive expected score.
struct NonpositiveExpectedScore : Error {
    using Error::Error;
};

// Two histograms live on different bin domains.
struct DomainMismatch : Error {
    using Error::Error;
};

// Containment of an empty sublist is undefined.
struct EmptySublist : Error {
    using Error::Error;
};

// Size window selects fewer histograms than the dispersion test needs.
struct TooFewInWindow : Error {
    using Error::Error;
};

// A record lacks the score field the ranking was asked for.
struct MissingKey : Error {
    using Error::Error;
};

// A probability vector is malformed (negative, non-finite, or not normalized).
struct InvalidDistribution : Error {
    using Error::Error;
};

// Generic precondition violation on operation parameters.
struct InvalidParams : Error {
    using Error::Error;
};

// Input file could not be read or parsed.
struct IngestError : Error {
    using Error::Error;
};

} // namespace tvaudit
