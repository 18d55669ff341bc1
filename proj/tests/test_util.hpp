#pragma once

#include <utility>

#include "doctest.h"
#include "freeconv/error.hpp"

namespace freeconv::testing {

template <class Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    std::forward<Fn>(fn)();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::BadArgument;
}

}  // namespace freeconv::testing
