#pragma once

#include <optional>

#include "lieform/errors.hpp"

/// Error code thrown by f, or nullopt when f returns normally.
template <class F>
std::optional<lieform::ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const lieform::Error& e) {
    return e.code();
  }
  return std::nullopt;
}
