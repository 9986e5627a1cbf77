#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace abx {

// Bad input: a model, config or argument that breaks a documented invariant.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A computation that cannot produce a trustworthy number (singular solve,
// nonpositive variance, broken stationarity).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Non-fatal diagnostics (ill-conditioned solves and similar). Defaults to stderr.
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler h);
void warn(const std::string& msg);

}  // namespace abx
