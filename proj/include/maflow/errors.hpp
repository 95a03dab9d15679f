#pragma once

#include <stdexcept>
#include <string>

namespace maflow {

struct BoundaryNodeError : std::runtime_error {
    explicit BoundaryNodeError(int node)
        : std::runtime_error("node " + std::to_string(node) + " is a boundary node"),
          node_index(node) {}
    int node_index;
};

struct InfeasibleDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TooCoarseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionFailedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HypothesisViolatedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CFLViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PoissonNotConvergedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CSV / config parse failure; row is 1-based including the header line.
struct ParseError : std::runtime_error {
    ParseError(std::string file_, long row_, std::string field_, std::string reason_)
        : std::runtime_error(file_ + ":" + std::to_string(row_) + ": field '" + field_ +
                             "': " + reason_),
          file(std::move(file_)), row(row_), field(std::move(field_)), reason(std::move(reason_)) {}
    std::string file;
    long row;
    std::string field;
    std::string reason;
};

} // namespace maflow
