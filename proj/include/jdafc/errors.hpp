#pragma once

#include <stdexcept>
#include <string>

namespace jdafc {

/// Invalid argument to a model or codec routine.
class parameter_error : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Symbols or reports whose metadata disagree with each other.
class protocol_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A lookup outside the range covered by a table (e.g. an overhead profile).
class range_error : public std::out_of_range
{
public:
  using std::out_of_range::out_of_range;
};

/// Malformed scenario or fixture file. Carries the 1-based line when known.
class config_error : public std::runtime_error
{
public:
  config_error(const std::string& what, int line = 0)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what)
    , line_{line}
  {}

  int line() const noexcept { return line_; }

private:
  int line_;
};

} // namespace jdafc
