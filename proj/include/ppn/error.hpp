#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ppn {

enum class ErrorCode {
  EmptySequence,
  InvalidCharacter,
  InvalidParams,
  OutOfRange,
  Overflow,
  NotSmoothOverP,
  ParamsMismatch,
  MalformedFasta,
  DuplicateId,
  MalformedMatrix,
  NonFiniteDistance,
  ParseError,
  DuplicateLeaf,
  InvalidLabel,
  LeafSetMismatch,
  TooFewLeaves,
  Io,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Newick syntax error; offset is the 0-based character position.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : Error(ErrorCode::ParseError,
              message + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace ppn
