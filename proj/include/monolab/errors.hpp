#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace monolab {

/// Mixed-signature mismatch between operands, or an index outside the signature.
class SignatureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the monomialization engine when a branch exceeds the depth guard.
class DepthExhausted : public std::runtime_error {
 public:
  explicit DepthExhausted(std::size_t max_depth)
      : std::runtime_error("depth guard exhausted at " + std::to_string(max_depth)),
        max_depth(max_depth) {}
  std::size_t max_depth;
};

/// File format error with a 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

} // namespace monolab
