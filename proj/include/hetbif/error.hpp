#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hetbif {

enum class ErrorKind {
  NotFound,
  ConfigError,
  DomainError,
  ParseError,
  StiffnessError,
  NoReturn,
  TangencyError,
  NoConvergence,
  NotASaddle,
  Degenerate,
  BlowupAtSeed,
  NoIntersection,
  NoContour,
  InsufficientWinding,
  CurveStall,
  BracketError,
  NoCycleInBracket,
  FoldBracketError,
  QuadratureError,
  EmptyFamily,
  BadPerturbation,
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception. The kind is the stable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a manifold branch leaves the winding region before the requested turn.
class InsufficientWindingError : public Error {
 public:
  InsufficientWindingError(int achieved, const std::string& message)
      : Error(ErrorKind::InsufficientWinding, message), achieved_(achieved) {}

  int achieved() const noexcept { return achieved_; }

 private:
  int achieved_;
};

}  // namespace hetbif
