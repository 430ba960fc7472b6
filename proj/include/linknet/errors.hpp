#pragma once

#include <stdexcept>
#include <string>

namespace linknet {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed URL text (no recognizable host).
struct UrlParseError : Error {
    using Error::Error;
};

// Host cannot be reduced to a registrable domain (e.g. it is itself a
// public suffix).
struct ReductionError : Error {
    using Error::Error;
};

// Inconsistent configuration artifacts: alias rules, registry rows,
// pipeline config.
struct ConfigError : Error {
    using Error::Error;
};

// Bad argument to a metric or transform (negative gini input,
// combined ties smaller than ties, ...).
struct ArgumentError : Error {
    using Error::Error;
};

// A provider cannot answer the requested direction/granularity.
struct CapabilityError : Error {
    using Error::Error;
};

// Provider temporarily unavailable; retryable.
struct TransientProviderError : Error {
    using Error::Error;
};

// Seed page unreachable or crawl cannot start.
struct CrawlError : Error {
    using Error::Error;
};

// Node lists or matrix shapes do not line up.
struct StructuralError : Error {
    using Error::Error;
};

// Correlation undefined (constant input vector).
struct UndefinedCorrelationError : Error {
    using Error::Error;
};

}  // namespace linknet
