#include "hetbif/error.hpp"

namespace hetbif {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::StiffnessError: return "StiffnessError";
    case ErrorKind::NoReturn: return "NoReturn";
    case ErrorKind::TangencyError: return "TangencyError";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotASaddle: return "NotASaddle";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::BlowupAtSeed: return "BlowupAtSeed";
    case ErrorKind::NoIntersection: return "NoIntersection";
    case ErrorKind::NoContour: return "NoContour";
    case ErrorKind::InsufficientWinding: return "InsufficientWinding";
    case ErrorKind::CurveStall: return "CurveStall";
    case ErrorKind::BracketError: return "BracketError";
    case ErrorKind::NoCycleInBracket: return "NoCycleInBracket";
    case ErrorKind::FoldBracketError: return "FoldBracketError";
    case ErrorKind::QuadratureError: return "QuadratureError";
    case ErrorKind::EmptyFamily: return "EmptyFamily";
    case ErrorKind::BadPerturbation: return "BadPerturbation";
  }
  return "Unknown";
}

}  // namespace hetbif
