#pragma once

// Small string helpers shared across modules. ASCII-only case folding;
// multi-byte UTF-8 passes through untouched.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cove {

std::string trim(std::string_view s);
std::string lower_ascii(std::string_view s);

// Collapses every run of whitespace to a single space and trims the ends.
std::string collapse_ws(std::string_view s);

// Splits on '\n'; keeps empty lines; a trailing '\n' yields no extra line.
std::vector<std::string> split_lines(std::string_view s);

std::vector<std::string> split_on(std::string_view s, char sep);

bool starts_with_ci(std::string_view s, std::string_view prefix);

// 64-bit FNV-1a over raw bytes; used for config/dataset fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace cove
