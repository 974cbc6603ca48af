#pragma once

#include <string>

#include "ffsc/errors.hpp"

namespace ffsc {

using UInt128 = unsigned __int128;

template <typename Int>
[[nodiscard]] inline Int checked_add(Int lhs, Int rhs) {
  Int out;
  if (__builtin_add_overflow(lhs, rhs, &out)) {
    throw OverflowError("exact integer capacity exceeded in addition");
  }
  return out;
}

template <typename Int>
[[nodiscard]] inline Int checked_mul(Int lhs, Int rhs) {
  Int out;
  if (__builtin_mul_overflow(lhs, rhs, &out)) {
    throw OverflowError("exact integer capacity exceeded in multiplication");
  }
  return out;
}

std::string to_string(UInt128 value);

}  // namespace ffsc
