#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace vecscope::text {

// Byte length of the Unicode White_Space code point starting at `pos` in
// UTF-8 text, or 0 when the code point there is not whitespace.
std::size_t whitespace_length(std::string_view s, std::size_t pos);

std::vector<std::string> split_whitespace(std::string_view s);

std::string_view trim(std::string_view s);

// Comma-separated list; entries are trimmed of ASCII spaces, empty entries dropped.
std::vector<std::string> split_list(std::string_view s, char sep = ',');

}  // namespace vecscope::text
