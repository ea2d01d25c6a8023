#pragma once

#include <stdexcept>
#include <string>

namespace codesim {

// Base class for everything the harness can throw on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A Program value violates an IR invariant (uninitialized read, bad index, ...).
struct InvalidProgram : Error {
    using Error::Error;
};

// Constraint-satisfying synthesis ran out of attempts.
struct GenerationExhausted : Error {
    using Error::Error;
};

// corpus_id does not name a stored template.
struct UnknownTemplate : Error {
    using Error::Error;
};

// Variant-pair family name not in the registry.
struct UnknownFamily : Error {
    using Error::Error;
};

// Technique not defined for the instance's family.
struct UnsupportedCombination : Error {
    using Error::Error;
};

// Dynamic step count exceeded the configured cap.
struct TraceTooLong : Error {
    using Error::Error;
};

// Metric called on an empty batch.
struct EmptyBatch : Error {
    using Error::Error;
};

// MAE requested but no answer in the batch parsed to a number.
struct NoParseableAnswers : Error {
    using Error::Error;
};

// Experiment spec / CLI configuration problems.
struct ConfigError : Error {
    using Error::Error;
};

// report() called without logs to read.
struct MissingLogs : Error {
    using Error::Error;
};

// Replay-mode lookup missed and live calls are forbidden.
struct CacheMiss : Error {
    using Error::Error;
};

// Client-side failures, surfaced per call and recorded by the runner.
struct ClientError : Error {
    using Error::Error;
};
struct AuthError : ClientError {
    using ClientError::ClientError;
};
struct RateLimited : ClientError {
    using ClientError::ClientError;
};
struct Timeout : ClientError {
    using ClientError::ClientError;
};
struct ContextOverflow : ClientError {
    using ClientError::ClientError;
};
struct MalformedResponse : ClientError {
    using ClientError::ClientError;
};

} // namespace codesim
