#pragma once

#include <stdexcept>
#include <string>

namespace guidedplan
{

class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error
{
  public:
    using Error::Error;
};

/// Invalid configuration value (unknown steering mode, bad bench spec, ...).
class ConfigError : public Error
{
  public:
    using Error::Error;
};

/// Malformed or truncated OGRID / PGRID / plane-stack file.
class FormatError : public Error
{
  public:
    using Error::Error;
};

class EmptyDistribution : public Error
{
  public:
    EmptyDistribution() : Error("empty distribution") {}
};

/// No prediction cell passes the sampling threshold.
class DegeneratePrediction : public Error
{
  public:
    DegeneratePrediction() : Error("prediction degenerate") {}
};

/// The space exploration found no circle chain (timeout or exhausted search).
class ExplorationFailed : public Error
{
  public:
    explicit ExplorationFailed(const std::string &why) : Error("no exploration found: " + why) {}
};

class GenerationError : public Error
{
  public:
    using Error::Error;
};

} // namespace guidedplan
