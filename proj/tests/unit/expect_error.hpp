#pragma once

#include <doctest.h>

#include "magreg/errors.hpp"

// Runs `expr` and checks that it throws magreg::Error of the given kind.
#define EXPECT_ERROR_KIND(expr, expected)                          \
  do {                                                             \
    bool thrown_ = false;                                          \
    try {                                                          \
      (void)(expr);                                                \
    } catch (const magreg::Error& e_) {                            \
      thrown_ = true;                                              \
      CHECK_MESSAGE(e_.kind() == (expected), e_.what());           \
    }                                                              \
    CHECK_MESSAGE(thrown_, "no magreg::Error from " #expr);        \
  } while (0)
