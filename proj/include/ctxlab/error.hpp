#pragma once

#include <stdexcept>
#include <string>

namespace ctxlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Space kinds or dimensions do not line up.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// A named structural invariant does not hold (orthonormality, positivity, ...).
class InvariantError : public Error {
  public:
    InvariantError(std::string invariant, const std::string &what)
        : Error(invariant + ": " + what), invariant_(std::move(invariant)) {}

    const std::string &invariant() const noexcept { return invariant_; }

  private:
    std::string invariant_;
};

/// An outcome label that is not present in a POVM.
class LabelError : public Error {
  public:
    using Error::Error;
};

/// Malformed external input (scenario files, command-line values).
class InputError : public Error {
  public:
    using Error::Error;
};

/// The numerics failed to produce a usable answer.
class NumericError : public Error {
  public:
    using Error::Error;
};

} // namespace ctxlab
