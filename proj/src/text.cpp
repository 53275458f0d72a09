#include "vecscope/text.hpp"

#include <cstdint>

namespace vecscope::text {

namespace {

bool is_white_space(std::uint32_t cp) {
  switch (cp) {
    case 0x0009: case 0x000A: case 0x000B: case 0x000C: case 0x000D:
    case 0x0020: case 0x0085: case 0x00A0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

}  // namespace

std::size_t whitespace_length(std::string_view s, std::size_t pos) {
  if (pos >= s.size()) return 0;
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return is_white_space(b0) ? 1 : 0;

  std::size_t len = 0;
  std::uint32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else {
    // 4-byte sequences and stray continuation bytes are never whitespace.
    return 0;
  }
  if (pos + len > s.size()) return 0;
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  return is_white_space(cp) ? len : 0;
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  std::size_t start = std::string_view::npos;
  while (i < s.size()) {
    if (std::size_t ws = whitespace_length(s, i); ws > 0) {
      if (start != std::string_view::npos) {
        out.emplace_back(s.substr(start, i - start));
        start = std::string_view::npos;
      }
      i += ws;
    } else {
      if (start == std::string_view::npos) start = i;
      ++i;
    }
  }
  if (start != std::string_view::npos) out.emplace_back(s.substr(start));
  return out;
}

std::string_view trim(std::string_view s) {
  std::size_t begin = 0;
  while (std::size_t ws = whitespace_length(s, begin)) begin += ws;
  std::size_t end = begin;
  // Walk forward so multi-byte whitespace at the tail is recognised.
  for (std::size_t i = begin; i < s.size();) {
    if (std::size_t ws = whitespace_length(s, i); ws > 0) {
      i += ws;
    } else {
      ++i;
      end = i;
    }
  }
  return s.substr(begin, end - begin);
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t stop = s.find(sep, start);
    if (stop == std::string_view::npos) stop = s.size();
    auto item = trim(s.substr(start, stop - start));
    if (!item.empty()) out.emplace_back(item);
    start = stop + 1;
  }
  return out;
}

}  // namespace vecscope::text
