#pragma once

#include <cstdarg>
#include <cstdio>
#include <string>

#include "dyadlab/errors.hpp"

namespace dyadlab {

// printf-style formatting into a std::string.
inline std::string strf(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    char buf[512];
    int n = std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    if (n < 0) throw error("formatting failed");
    return std::string(buf, static_cast<std::size_t>(n));
}

// Writes content to path via a temporary file and an atomic rename, so a
// failed run never leaves a partial output behind.
void atomic_write_file(const std::string& path, std::string_view content);

std::string read_file(const std::string& path);

} // namespace dyadlab
