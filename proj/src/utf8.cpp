#include "morphoseq/utf8.hpp"

#include "morphoseq/errors.hpp"

namespace morphoseq::utf8 {
namespace {

// Length of the sequence starting at s[i] and its code point; 0 when invalid.
std::size_t next(std::string_view s, std::size_t i, char32_t& cp) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  std::size_t len;
  char32_t min;
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  return len;
}

}  // namespace

std::vector<std::string> split_code_points(std::string_view s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < s.size();) {
    char32_t cp;
    const std::size_t len = next(s, i, cp);
    if (len == 0) throw ArgumentError("invalid UTF-8 at byte " + std::to_string(i));
    out.emplace_back(s.substr(i, len));
    i += len;
  }
  return out;
}

std::u32string decode(std::string_view s) {
  std::u32string out;
  for (std::size_t i = 0; i < s.size();) {
    char32_t cp;
    const std::size_t len = next(s, i, cp);
    if (len == 0) throw ArgumentError("invalid UTF-8 at byte " + std::to_string(i));
    out.push_back(cp);
    i += len;
  }
  return out;
}

bool is_valid(std::string_view s) {
  for (std::size_t i = 0; i < s.size();) {
    char32_t cp;
    const std::size_t len = next(s, i, cp);
    if (len == 0) return false;
    i += len;
  }
  return true;
}

}  // namespace morphoseq::utf8
