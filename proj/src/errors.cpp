#include "mocap/errors.hpp"

namespace mocap {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::MissingJoint: return "MissingJoint";
        case ErrorCode::UnknownJoint: return "UnknownJoint";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::DegenerateBone: return "DegenerateBone";
        case ErrorCode::CycleDetected: return "CycleDetected";
        case ErrorCode::UnmappedJoint: return "UnmappedJoint";
        case ErrorCode::DuplicateJoint: return "DuplicateJoint";
        case ErrorCode::DegenerateOffset: return "DegenerateOffset";
        case ErrorCode::HierarchyMismatch: return "HierarchyMismatch";
        case ErrorCode::EmptyMotion: return "EmptyMotion";
        case ErrorCode::MissingJointRotation: return "MissingJointRotation";
        case ErrorCode::NonUnitAxis: return "NonUnitAxis";
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
        case ErrorCode::ZeroHipHeight: return "ZeroHipHeight";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

}  // namespace mocap
