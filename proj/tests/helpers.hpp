#pragma once

#include <doctest.h>

#include "locus/error.hpp"

// Asserts that `expr` throws locus::Error with the given code.
#define CHECK_LOCUS_ERROR(expr, expected)                                                          \
    do {                                                                                           \
        bool caught_locus_error_ = false;                                                          \
        try {                                                                                      \
            (void)(expr);                                                                          \
        } catch (const locus::Error& e_) {                                                         \
            caught_locus_error_ = true;                                                            \
            CHECK(e_.code() == locus::ErrorCode::expected);                                        \
        }                                                                                          \
        CHECK_MESSAGE(caught_locus_error_, "expected Error{" #expected "} from " #expr);           \
    } while (0)
