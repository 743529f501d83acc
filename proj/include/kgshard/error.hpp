#pragma once

#include <stdexcept>
#include <string>

namespace kgshard {

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Syntax error in an input document, carrying a 1-based line number.
struct parse_error : error {
    parse_error(std::size_t line, const std::string& msg)
        : error("line " + std::to_string(line) + ": " + msg), line(line) {}
    std::size_t line;
};

}  // namespace kgshard
