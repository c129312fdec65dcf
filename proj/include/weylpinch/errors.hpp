#ifndef WEYLPINCH_ERRORS_HPP
#define WEYLPINCH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace weylpinch {

/// Syntax error in a metric spec or expression, with 1-based location.
class ParseError : public std::runtime_error {
public:
  ParseError(std::string msg, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + msg),
        line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

/// Expression evaluation left its mathematical domain (1/0, log of a
/// non-positive value, non-finite intermediate).
class EvalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A chart point outside the declared domain, on a coordinate-singular
/// locus, or where the metric fails to be positive definite.
class ChartDomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace weylpinch

#endif
