#pragma once

#include <stdexcept>
#include <string>

namespace evolab {

struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IndexError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ArgumentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LookupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CorruptionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite values where finite ones are required (loss, gradients).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace evolab
