#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rcf {

// Base for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (CSV structure, unparseable numbers, bad enum labels).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a dataset invariant (nonpositive cost,
// completion before decision, duplicate id, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A value outside an operation's domain (risk <= 0, quantile q > 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Reference class below the configured minimum size; carries the count.
class ClassTooSmallError : public ValidationError {
 public:
  ClassTooSmallError(std::size_t got, std::size_t need)
      : ValidationError("reference class has " + std::to_string(got) +
                        " observations, below minimum size " + std::to_string(need)),
        got_(got), need_(need) {}
  std::size_t size() const { return got_; }
  std::size_t min_size() const { return need_; }

 private:
  std::size_t got_;
  std::size_t need_;
};

}  // namespace rcf
