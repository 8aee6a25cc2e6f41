#pragma once

#include <stdexcept>

namespace dhne {

// Invalid configuration or option values. The CLI maps these to usage errors (exit 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file contents (triplet files, score files, row files). Exit 2 as well.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dimension mismatch between an operation and its operands.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Non-finite values where finite ones are required (diverged training, bad objective).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Negative/non-edge sampling ran out of candidates (near-complete hypergraph).
struct SamplingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Snapshot container violations: bad magic, wrong version, truncation.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation protocol misuse: empty score lists, wrong arity.
struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dhne
