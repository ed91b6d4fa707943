#pragma once

#include <doctest.h>

#include "shrinkreg/error.hpp"

namespace testing {

/// Runs fn and returns the code of the shrinkreg::Error it throws.
template <class Fn>
shrinkreg::ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const shrinkreg::Error& e) {
    return e.code();
  }
  FAIL("expected a shrinkreg::Error");
  return shrinkreg::ErrorCode::InvalidConfig;
}

}  // namespace testing
