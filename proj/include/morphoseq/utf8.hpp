#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace morphoseq::utf8 {

/// Splits valid UTF-8 into one string per code point. Throws ArgumentError on invalid input.
std::vector<std::string> split_code_points(std::string_view s);

std::u32string decode(std::string_view s);

bool is_valid(std::string_view s);

}  // namespace morphoseq::utf8
