#pragma once

#include <stdexcept>
#include <string>

namespace mocap {

enum class ErrorCode {
    SyntaxError,
    MissingJoint,
    UnknownJoint,
    NonFinite,
    DegenerateBone,
    CycleDetected,
    UnmappedJoint,
    DuplicateJoint,
    DegenerateOffset,
    HierarchyMismatch,
    EmptyMotion,
    MissingJointRotation,
    NonUnitAxis,
    ZeroVector,
    SingularMatrix,
    NonMonotonicTime,
    ZeroHipHeight,
    TooShort,
    InvalidSpec,
    IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace mocap
