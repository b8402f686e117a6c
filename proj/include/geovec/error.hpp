#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geovec {

enum class ErrorKind {
  InvalidGeometry,
  MalformedInput,
  IoFailure,
  NotFound,
  InvalidResolution,
  InvalidZoom,
  EmptyArea,
  NoSeeds,
  DuplicateSeeds,
  TooManyRegions,
  EmptyRegions,
  WrongMethod,
  UnknownRegion,
  ShapeMismatch,
  VersionMismatch,
  InconsistentJoint,
  DegenerateGraph,
  ColumnMismatch,
  EmptyJoint,
  BadK,
  SingularSystem,
  TooFew,
  NumericalFailure,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it onto exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace geovec
