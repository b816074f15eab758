#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace docmt::text {

// Decodes the UTF-8 code point starting at byte `i` and advances `i` past it.
// Malformed bytes decode as U+FFFD, consuming one byte.
char32_t decode(std::string_view s, std::size_t& i);

void append_utf8(std::string& out, char32_t cp);

bool is_space(char32_t cp);
bool is_punct(char32_t cp);
bool is_cjk(char32_t cp);

// Byte range [begin, end) of one whitespace-delimited token.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Token byte ranges between Unicode whitespace runs.
std::vector<Span> whitespace_spans(std::string_view s);

std::vector<std::string> split_whitespace(std::string_view s);

std::string trim(std::string_view s);
std::string rtrim(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// True iff `token` is '#' followed by one or more ASCII digits and nothing
// else. On match stores the parsed index (saturating at 2^63) in *index.
bool is_separator_token(std::string_view token, std::uint64_t* index = nullptr);

bool valid_utf8(std::string_view s);

}  // namespace docmt::text
