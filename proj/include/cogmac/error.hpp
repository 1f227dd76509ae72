#pragma once

#include <stdexcept>
#include <string>

namespace cogmac {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (non-finite input, probability outside its range, tau >= T, ...).
class domain_error : public error {
  public:
    using error::error;
};

/// An iterative solver hit its iteration cap without meeting its tolerance.
class solver_error : public error {
  public:
    solver_error(const std::string& what, double residual)
        : error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual)
    {
    }

    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

/// The analytical model does not cover the requested configuration
/// (e.g. heterogeneous sensing in the multi-channel closed form).
class unsupported_mode : public error {
  public:
    using error::error;
};

/// Malformed or inconsistent configuration input.
class config_error : public error {
  public:
    using error::error;
};

} // namespace cogmac
