#pragma once

#include <optional>

#include "gentrans/error.hpp"

template <typename F>
std::optional<gentrans::ErrorCode> error_code_of(F&& f) {
    try {
        f();
    } catch (const gentrans::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

#define CHECK_ERROR(expr, code) CHECK(error_code_of([&] { (void)(expr); }) == std::optional(gentrans::ErrorCode::code))
#define REQUIRE_ERROR(expr, code) \
    REQUIRE(error_code_of([&] { (void)(expr); }) == std::optional(gentrans::ErrorCode::code))
