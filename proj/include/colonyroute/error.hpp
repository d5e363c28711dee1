#pragma once

#include <stdexcept>
#include <string>

namespace colonyroute {

enum class ErrorCode {
    MalformedHeader,
    DimensionMismatch,
    UnknownCell,
    MalformedScenario,
    InvalidWindow,
    BlockedCell,
    CoincidentCells,
    Unreachable,
    DuplicateId,
    InsufficientFreeCells,
    Disconnected,
    DegeneratePath,
    NonPositiveNorm,
    InvalidParams,
    NoPath,
    EmptyAllowedSet,
    TooManyTasks,
    Io,
};

const char *to_string(ErrorCode code);

// Every library failure is reported through this type; code() lets callers
// tell input problems apart from internal ones.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace colonyroute
