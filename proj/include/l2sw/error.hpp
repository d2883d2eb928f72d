#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace l2sw {

/// Malformed or out-of-contract user input (frames, traces, config).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Frame body shorter than dst + src + ethertype + FCS.
class RuntFrameError : public InputError {
 public:
  using InputError::InputError;
};

/// Trace file problem, carrying the 1-based line number of the offending record.
class TraceError : public InputError {
 public:
  TraceError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A simulator invariant broke. Always a model bug, never an input condition.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A stored block chain has no end-of-packet within the pool size.
class ChainError : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

}  // namespace l2sw
