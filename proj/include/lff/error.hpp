#pragma once

#include <stdexcept>
#include <string>

namespace lff {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A meta-level encoding that does not describe a hypothesis.
class MalformedEncoding : public Error {
 public:
  using Error::Error;
};

// Bias bounds that are inconsistent, or a size no hypothesis can have.
class InvalidBias : public Error {
 public:
  using Error::Error;
};

class UnknownPredicate : public Error {
 public:
  using Error::Error;
};

// Semantically invalid task (missing examples, wrong example predicate, ...).
class TaskError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Thrown out of long-running search or evaluation when a stop was requested.
class Cancelled : public std::exception {
 public:
  const char* what() const noexcept override { return "cancelled"; }
};

}  // namespace lff
