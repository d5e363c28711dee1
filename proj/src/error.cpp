#include "colonyroute/error.hpp"

namespace colonyroute {

const char *to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownCell: return "UnknownCell";
    case ErrorCode::MalformedScenario: return "MalformedScenario";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::BlockedCell: return "BlockedCell";
    case ErrorCode::CoincidentCells: return "CoincidentCells";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::InsufficientFreeCells: return "InsufficientFreeCells";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::DegeneratePath: return "DegeneratePath";
    case ErrorCode::NonPositiveNorm: return "NonPositiveNorm";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::EmptyAllowedSet: return "EmptyAllowedSet";
    case ErrorCode::TooManyTasks: return "TooManyTasks";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

} // namespace colonyroute
