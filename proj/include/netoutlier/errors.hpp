#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace netoutlier {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input files: missing files, bad headers, unparsable cells.
class FormatError : public Error {
public:
    using Error::Error;
};

// Structurally valid input that violates a contract: duplicate node ids,
// row length mismatches, K >= m, unknown sample ids, single-class labels.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Filesystem trouble distinct from content problems.
class IoError : public Error {
public:
    using Error::Error;
};

// Cosine distance is undefined for a zero vector; neighbor search catches
// this and substitutes the maximal distance.
class ZeroVectorError : public Error {
public:
    using Error::Error;
};

// One Newton iteration record; also the payload of NumericalError so a
// failed solve can be diagnosed from the trace alone.
struct TraceRow {
    int iteration = 0;
    double objective = 0.0;
    double grad_norm = 0.0;
    double step = 0.0;
    int active_size = 0;
};

// Non-finite objective or gradient during optimization.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, std::vector<TraceRow> trace)
        : Error(what), trace_(std::move(trace)) {}
    const std::vector<TraceRow>& trace() const { return trace_; }

private:
    std::vector<TraceRow> trace_;
};

}  // namespace netoutlier
