#include "lapsparse/error.hpp"

namespace lapsparse {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::NegativeWeight: return "NegativeWeight";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::EdgeNotFound: return "EdgeNotFound";
        case ErrorCode::SizeCapExceeded: return "SizeCapExceeded";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::BudgetExceedsEdges: return "BudgetExceedsEdges";
        case ErrorCode::InfeasibleBounds: return "InfeasibleBounds";
        case ErrorCode::ZeroWeightEdge: return "ZeroWeightEdge";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace lapsparse
