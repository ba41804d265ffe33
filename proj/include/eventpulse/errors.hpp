#pragma once

#include <stdexcept>
#include <string>

namespace eventpulse {

// Unreadable or malformed input (files, CSV rows, out-of-range fields).
// The CLI maps this to exit code 2.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Not enough data to run the requested analysis (too few samples, series
// shorter than a window, no city passing a filter). CLI exit code 3.
struct insufficient_data : std::runtime_error {
  explicit insufficient_data(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace eventpulse
