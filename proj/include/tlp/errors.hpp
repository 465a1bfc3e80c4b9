#pragma once

#include <stdexcept>
#include <string>

namespace tlp {

// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Timelines of a plan disagree on the horizon, or a timeline is ill-formed.
class MalformedPlan : public Error {
public:
  using Error::Error;
};

// Misuse of an API whose precondition the caller is responsible for.
class UsageError : public Error {
public:
  using Error::Error;
};

// A clause whose closure relates some term strictly before itself.
class InconsistentClause : public Error {
public:
  InconsistentClause(std::string rule, std::size_t statement)
      : Error("inconsistent clause in rule '" + rule + "', statement " +
              std::to_string(statement)),
        rule_id(std::move(rule)), statement_index(statement) {}

  std::string rule_id;
  std::size_t statement_index;
};

// A word whose change sequence does not chain end-values to start-values.
class EncodingError : public Error {
public:
  EncodingError(std::string var, std::size_t pos, const std::string &what)
      : Error(what), variable(std::move(var)), position(pos) {}

  std::string variable;
  std::size_t position;
};

// Two viewpoints of the same rule in one automaton state are incomparable.
class LinearityViolation : public Error {
public:
  using Error::Error;
};

} // namespace tlp
