#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace softk {

enum class ErrorKind {
  InvalidInput,
  NotHermitian,
  DomainError,
  ShapeError,
  RelationViolation,
  NoMatching,
  NotReducible,
  NotNearInteger,
  BadGrid,
  ProjectionDefect,
  NotAProjection,
  SupportMismatch,
  GluingMismatch,
  RankDrop,
  NotLocallyConstant,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for error kinds that mean "the mathematics failed" as opposed to
/// bad usage or unreadable input. The CLI maps the former to exit code 2.
bool is_mathematical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace softk
