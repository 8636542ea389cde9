#pragma once

#include <stdexcept>
#include <string>

namespace gaitrec {

enum class ErrorCode {
  InvalidArgument,
  Io,
  MalformedAsf,
  MalformedAmc,
  MalformedFile,
  HeterogeneousTopology,
  UnboundMotion,
  DimensionMismatch,
  EmptySequence,
  RepresentationMismatch,
  DegenerateSample,
  LayoutMismatch,
  TooFewClasses,
  DegenerateScatter,
  SingularWithinScatter,
  InsufficientClasses,
  EmptyGallery,
  UnknownMethod,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure in the library is reported through this type; the C API maps
// `code()` onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace gaitrec
