#include "blowup/error.hpp"

namespace blowup {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::NonconformingArrays: return "NonconformingArrays";
    case ErrorKind::TailTooLarge: return "TailTooLarge";
    case ErrorKind::TooFewSnapshots: return "TooFewSnapshots";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::EtaNegative: return "EtaNegative";
    case ErrorKind::PsiStarOutOfRange: return "PsiStarOutOfRange";
    case ErrorKind::ThetaNegative: return "ThetaNegative";
    case ErrorKind::StepRejected: return "StepRejected";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::SearchFailed: return "SearchFailed";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::NegativePressure: return "NegativePressure";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace blowup
