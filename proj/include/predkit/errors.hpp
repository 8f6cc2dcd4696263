/*******************************************************************************
 *
 * Exception hierarchy shared by all predkit components.
 *
 ******************************************************************************/

#pragma once

#include <stdexcept>
#include <string>

namespace predkit {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Syntax error in a model, formula, property, or predicate file.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(msg + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line(line),
        column(column) {}

  std::size_t line;
  std::size_t column;
};

// A rename mapping collides (non-injective on occurring variables, or a
// target captures an existing variable).
class CollisionError : public Error {
public:
  using Error::Error;
};

// A formula operation met an atom it cannot handle exactly.
class UnsupportedAtomError : public Error {
public:
  using Error::Error;
};

// A property atom over abstracted variables has no exact boolean image.
class UnexpressibleAtomError : public Error {
public:
  using Error::Error;
};

// Property uses an operator outside the fragment a checker supports.
class UnsupportedOperatorError : public Error {
public:
  using Error::Error;
};

// Predicate selection found no admissible configuration.
class NoFeasibleConfigError : public Error {
public:
  using Error::Error;
};

// Explicit-state enumeration escaped its bounding box.
class ClosureViolationError : public Error {
public:
  using Error::Error;
};

// Explicit-state enumeration exceeded the state/work budget.
class StateExplosionError : public Error {
public:
  using Error::Error;
};

}  // namespace predkit
