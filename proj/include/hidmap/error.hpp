#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hidmap {

enum class ErrorCode {
  EmptyInput,
  RaggedRow,
  DuplicateDimensionName,
  DimensionAlreadyFixed,
  InvalidPath,
  TooFewSides,
  BadFractions,
  InvalidPolygon,
  DegenerateSlab,
  NoVisibleDimensions,
  EmptySelection,
  InvalidOrder,
  PolygonTooSmall,
  UnknownNode,
  InvalidPosition,
  InvalidDimension,
  LastVisibleDimension,
  EmptyStack,
  BadRequest,
  IoError,
  PortInUse,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// Every recoverable failure in the library is reported as an Error carrying
// a stable code; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hidmap
