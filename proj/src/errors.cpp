#include "abx/errors.hpp"

#include <iostream>

namespace abx {

namespace {

WarningHandler& handler() {
  static WarningHandler h = [](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; };
  return h;
}

}  // namespace

void set_warning_handler(WarningHandler h) { handler() = std::move(h); }

void warn(const std::string& msg) {
  if (handler()) handler()(msg);
}

}  // namespace abx
