#pragma once

#include <stdexcept>
#include <string>

namespace gsbmi {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Sample too small or has zero spread (e.g. constant sample in Silverman's rule).
class DegenerateSample : public Error {
public:
  explicit DegenerateSample(const std::string& what) : Error(what) {}
};

/// One of the two groups has no observations.
class OneGroupEmpty : public Error {
public:
  explicit OneGroupEmpty(const std::string& what) : Error(what) {}
};

/// Two grids that must coincide do not.
class GridMismatch : public Error {
public:
  explicit GridMismatch(const std::string& what) : Error(what) {}
};

/// The requested phi generator sits on an A=0 or B=0 manifold; use the limit form.
class LimitCase : public Error {
public:
  explicit LimitCase(const std::string& what) : Error(what) {}
};

/// Estimated (or population) sigma^2 is not strictly positive.
class DegenerateVariance : public Error {
public:
  explicit DegenerateVariance(const std::string& what) : Error(what) {}
};

/// A Bump contamination window does not fit the density grid.
class PolicyDomain : public Error {
public:
  explicit PolicyDomain(const std::string& what) : Error(what) {}
};

/// Malformed input row; carries a 1-based line number when known.
class ParseError : public Error {
public:
  ParseError(const std::string& what, long line = -1) : Error(what), line_(line) {}
  long line() const { return line_; }

private:
  long line_;
};

/// Input file lacks a required column or section.
class SchemaError : public Error {
public:
  explicit SchemaError(const std::string& what) : Error(what) {}
};

/// Invalid configuration value (level outside (0,1), empty grids, ...).
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Filesystem failure while reading or writing results.
class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace gsbmi
