#include "geovec/error.hpp"

namespace geovec {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidGeometry: return "InvalidGeometry";
    case ErrorKind::MalformedInput: return "MalformedInput";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::InvalidResolution: return "InvalidResolution";
    case ErrorKind::InvalidZoom: return "InvalidZoom";
    case ErrorKind::EmptyArea: return "EmptyArea";
    case ErrorKind::NoSeeds: return "NoSeeds";
    case ErrorKind::DuplicateSeeds: return "DuplicateSeeds";
    case ErrorKind::TooManyRegions: return "TooManyRegions";
    case ErrorKind::EmptyRegions: return "EmptyRegions";
    case ErrorKind::WrongMethod: return "WrongMethod";
    case ErrorKind::UnknownRegion: return "UnknownRegion";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::VersionMismatch: return "VersionMismatch";
    case ErrorKind::InconsistentJoint: return "InconsistentJoint";
    case ErrorKind::DegenerateGraph: return "DegenerateGraph";
    case ErrorKind::ColumnMismatch: return "ColumnMismatch";
    case ErrorKind::EmptyJoint: return "EmptyJoint";
    case ErrorKind::BadK: return "BadK";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::TooFew: return "TooFew";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

}  // namespace geovec
