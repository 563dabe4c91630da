#pragma once

#include <stdexcept>
#include <string>

namespace polyroute {

// Numeric values are part of the C API (see polyroute.h) and must not change.
enum class ErrorCode : int {
    Ok = 0,
    InvalidArgument = 1,
    IoError = 2,
    ParseError = 3,
    NonTriangular = 4,
    NotClosed = 5,
    NonConvex = 6,
    DegenerateSegment = 7,
    DegenerateFace = 8,
    NotAdjacent = 9,
    UnboundedSketch = 10,
    DisconnectedSpanner = 11,
    UnknownVertex = 12,
    TrivialRoute = 13,
    NoExitFace = 14,
    HopLimitExceeded = 15,
    FormatVersionMismatch = 16,
    ChecksumMismatch = 17,
    TruncatedStream = 18,
    Internal = 99,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace polyroute
