#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace walker {

/** @brief Base class for every error raised by the library. */
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/** @brief Malformed expression text; carries the byte offset of the failure. */
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}

  [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

class UnboundParameter : public Error {
public:
  explicit UnboundParameter(const std::string& name)
      : Error("unbound parameter: " + name), name_(name) {}

  [[nodiscard]] const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

class EvaluationOverflow : public Error {
public:
  EvaluationOverflow() : Error("evaluation overflow: result is not finite") {}
};

class PreconditionViolation : public Error {
public:
  using Error::Error;
};

class SamplingBudgetExhausted : public Error {
public:
  SamplingBudgetExhausted() : Error("sampling budget exhausted") {}
};

class InvalidOptions : public Error {
public:
  using Error::Error;
};

class MissingFrame : public Error {
public:
  MissingFrame() : Error("curvature component monitor requires a transported frame") {}
};

class NoRuleForEntry : public Error {
public:
  explicit NoRuleForEntry(const std::string& id) : Error("catalog entry has no such rule: " + id) {}
};

class WrongEntryKind : public Error {
public:
  explicit WrongEntryKind(const std::string& id) : Error("operation does not apply to catalog entry: " + id) {}
};

} // namespace walker
