#ifndef GEOPHASE_TEST_UTIL_HPP
#define GEOPHASE_TEST_UTIL_HPP

#include <optional>

#include "geophase/error.hpp"

namespace geophase::testing {

// Code of the geophase::Error thrown by f, or nullopt if f returns normally.
template <typename F>
std::optional<ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace geophase::testing

#endif  // GEOPHASE_TEST_UTIL_HPP
