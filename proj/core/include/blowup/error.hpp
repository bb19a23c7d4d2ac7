#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blowup {

// Every failure the library reports carries one of these kinds so that
// callers (the CLI in particular) can map them onto exit codes.
enum class ErrorKind {
  InvalidArgument,
  InvalidState,
  NonconformingArrays,
  TailTooLarge,
  TooFewSnapshots,
  DomainError,
  DegenerateData,
  EtaNegative,
  PsiStarOutOfRange,
  ThetaNegative,
  StepRejected,
  OutOfRange,
  SearchFailed,
  GridTooSmall,
  NegativePressure,
  NonFinite,
  Io,
  Parse,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace blowup
