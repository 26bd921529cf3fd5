#pragma once

#include <cmath>
#include <string>

#include "optopix/config.hpp"
#include "optopix/error.hpp"

namespace testing {

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline optopix::PixelConfig preset(const std::string& name) {
  return optopix::load_pixel_config(name);
}

// Runs fn and returns the error code it throws, or "" if it returns normally.
template <class F>
std::string error_code(F&& fn) {
  try {
    fn();
  } catch (const optopix::Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace testing
