#pragma once

#include <stdexcept>
#include <string>

namespace qthermo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally malformed input: unreadable files, missing or mistyped fields.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A numeric argument violated its precondition. `field()` names the offender.
class DomainError : public Error {
 public:
  DomainError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A simulated experiment could not produce a usable result.
class DegenerateExperimentError : public Error {
 public:
  using Error::Error;
};

}  // namespace qthermo
