#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ramanwt {

enum class Errc {
  MalformedLine,
  TooShort,
  NonFinite,
  InvalidPeak,
  SchemaError,
  ZeroSignal,
  EmptyClass,
  ShapeMismatch,
  ScaleTooLarge,
  DegenerateRange,
  LabelOutOfRange,
  BatchTooSmall,
  EmptyTrainingSet,
  EmptyInput,
  NoConvergence,
  Diverged,
  IoError,
  InvalidArgument,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::TooShort: return "TooShort";
    case Errc::NonFinite: return "NonFinite";
    case Errc::InvalidPeak: return "InvalidPeak";
    case Errc::SchemaError: return "SchemaError";
    case Errc::ZeroSignal: return "ZeroSignal";
    case Errc::EmptyClass: return "EmptyClass";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::ScaleTooLarge: return "ScaleTooLarge";
    case Errc::DegenerateRange: return "DegenerateRange";
    case Errc::LabelOutOfRange: return "LabelOutOfRange";
    case Errc::BatchTooSmall: return "BatchTooSmall";
    case Errc::EmptyTrainingSet: return "EmptyTrainingSet";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::Diverged: return "Diverged";
    case Errc::IoError: return "IoError";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// Carries a code plus an optional index (line number, entry index, ...) so
// callers and tests can dispatch without parsing the message text.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::int64_t index = -1)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code),
        index_(index) {}

  Errc code() const noexcept { return code_; }
  std::int64_t index() const noexcept { return index_; }

 private:
  Errc code_;
  std::int64_t index_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message, std::int64_t index = -1) {
  throw Error(code, message, index);
}

}  // namespace ramanwt
