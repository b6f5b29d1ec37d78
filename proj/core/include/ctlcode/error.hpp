#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctlcode {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bit sequence was used where an executable code of the structure is required.
class NotExecutable : public Error {
 public:
  using Error::Error;
};

/// Rejection of a textual input (assembly, source, scripts, manifests).
/// `line` is 1-based, 0 when the failure is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ctlcode
