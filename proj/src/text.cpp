#include "docmt/text.hpp"

namespace docmt::text {

char32_t decode(std::string_view s, std::size_t& i) {
  const unsigned char b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + len > s.size()) {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k < len; ++k) {
    const unsigned char b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  // Reject overlong forms and surrogates.
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
      (len == 4 && cp < 0x10000) || (cp >= 0xD800 && cp <= 0xDFFF) ||
      cp > 0x10FFFF) {
    ++i;
    return 0xFFFD;
  }
  i += len;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space(char32_t cp) {
  switch (cp) {
    case 0x09:
    case 0x0A:
    case 0x0B:
    case 0x0C:
    case 0x0D:
    case 0x20:
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_punct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  // Latin-1 signs and symbols.
  if (cp >= 0xA1 && cp <= 0xBF) return true;
  // General punctuation (dashes, quotes, daggers, permille, primes).
  if ((cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E))
    return true;
  // CJK symbols and punctuation (U+3000 itself is whitespace).
  if (cp >= 0x3001 && cp <= 0x303F) return true;
  // Fullwidth ASCII punctuation and halfwidth CJK punctuation.
  if ((cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
      (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65))
    return true;
  return false;
}

bool is_cjk(char32_t cp) {
  // Unified ideograph blocks.
  if (cp >= 0x4E00 && cp <= 0x9FFF) return true;
  if (cp >= 0x3400 && cp <= 0x4DBF) return true;
  if (cp >= 0xF900 && cp <= 0xFAFF) return true;
  if (cp >= 0x20000 && cp <= 0x2A6DF) return true;
  if (cp >= 0x2A700 && cp <= 0x2EBEF) return true;
  // Fullwidth and CJK punctuation split per character as well.
  if (cp >= 0x3001 && cp <= 0x303F) return true;
  if ((cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
      (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65))
    return true;
  return false;
}

std::vector<Span> whitespace_spans(std::string_view s) {
  std::vector<Span> spans;
  std::size_t i = 0;
  std::size_t token_begin = std::string_view::npos;
  while (i < s.size()) {
    const std::size_t at = i;
    const char32_t cp = decode(s, i);
    if (is_space(cp)) {
      if (token_begin != std::string_view::npos) {
        spans.push_back({token_begin, at});
        token_begin = std::string_view::npos;
      }
    } else if (token_begin == std::string_view::npos) {
      token_begin = at;
    }
  }
  if (token_begin != std::string_view::npos) spans.push_back({token_begin, s.size()});
  return spans;
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> tokens;
  for (const Span& span : whitespace_spans(s))
    tokens.emplace_back(s.substr(span.begin, span.end - span.begin));
  return tokens;
}

std::string trim(std::string_view s) {
  std::size_t begin = 0;
  std::size_t first = std::string_view::npos;
  std::size_t last_end = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    begin = i;
    const char32_t cp = decode(s, i);
    if (!is_space(cp)) {
      if (first == std::string_view::npos) first = begin;
      last_end = i;
    }
  }
  if (first == std::string_view::npos) return std::string();
  return std::string(s.substr(first, last_end - first));
}

std::string rtrim(std::string_view s) {
  std::size_t last_end = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    const char32_t cp = decode(s, i);
    if (!is_space(cp)) last_end = i;
  }
  return std::string(s.substr(0, last_end));
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

bool is_separator_token(std::string_view token, std::uint64_t* index) {
  if (token.size() < 2 || token[0] != '#') return false;
  std::uint64_t value = 0;
  bool saturated = false;
  for (std::size_t i = 1; i < token.size(); ++i) {
    const char c = token[i];
    if (c < '0' || c > '9') return false;
    if (!saturated) {
      if (value > (0x7FFFFFFFFFFFFFFFULL - 9) / 10) {
        saturated = true;
        value = 0x7FFFFFFFFFFFFFFFULL;
      } else {
        value = value * 10 + static_cast<std::uint64_t>(c - '0');
      }
    }
  }
  if (index != nullptr) *index = value;
  return true;
}

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t before = i;
    if (decode(s, i) == 0xFFFD) {
      // U+FFFD encoded literally is fine; anything else was malformed.
      if (i - before != 3 || s.substr(before, 3) != "\xEF\xBF\xBD") return false;
    }
  }
  return true;
}

}  // namespace docmt::text
