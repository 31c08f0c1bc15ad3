#include "softk/errors.hpp"

namespace softk {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ShapeError: return "ShapeError";
    case ErrorKind::RelationViolation: return "RelationViolation";
    case ErrorKind::NoMatching: return "NoMatching";
    case ErrorKind::NotReducible: return "NotReducible";
    case ErrorKind::NotNearInteger: return "NotNearInteger";
    case ErrorKind::BadGrid: return "BadGrid";
    case ErrorKind::ProjectionDefect: return "ProjectionDefect";
    case ErrorKind::NotAProjection: return "NotAProjection";
    case ErrorKind::SupportMismatch: return "SupportMismatch";
    case ErrorKind::GluingMismatch: return "GluingMismatch";
    case ErrorKind::RankDrop: return "RankDrop";
    case ErrorKind::NotLocallyConstant: return "NotLocallyConstant";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_mathematical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::ShapeError:
    case ErrorKind::BadGrid:
    case ErrorKind::ParseError:
    case ErrorKind::IoError:
      return false;
    default:
      return true;
  }
}

}  // namespace softk
