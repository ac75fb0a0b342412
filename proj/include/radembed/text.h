#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace radembed {

// Decodes UTF-8 into code points. Throws DataError on invalid sequences.
std::u32string utf8_decode(std::string_view s);
std::string utf8_encode(std::u32string_view s);
std::string utf8_encode(char32_t c);

// Code points of a raw corpus line with ASCII whitespace removed.
std::u32string sentence_chars(std::string_view line);

// Splits on single ASCII spaces. Leading, trailing or doubled spaces produce
// empty fields, which callers treat as tag-scheme violations.
std::vector<std::string_view> split_spaces(std::string_view line);

// Reads all lines, stripping a trailing '\r' and a leading UTF-8 BOM.
std::vector<std::string> read_lines(std::istream& in);
std::vector<std::string> read_lines_from(const std::string& path);

}  // namespace radembed
