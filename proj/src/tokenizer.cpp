#include "docmt/tokenizer.hpp"

#include "docmt/text.hpp"

namespace docmt::tok {

namespace {

TokenSequence tokenize_whitespace(std::string_view s) {
  return text::split_whitespace(s);
}

TokenSequence tokenize_intl(std::string_view s) {
  TokenSequence tokens;
  std::string current;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t at = i;
    const char32_t cp = text::decode(s, i);
    if (text::is_space(cp)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else if (text::is_punct(cp)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
      tokens.emplace_back(s.substr(at, i - at));
    } else {
      current.append(s.substr(at, i - at));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TokenSequence tokenize_char_cjk(std::string_view s) {
  TokenSequence tokens;
  std::string current;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t at = i;
    const char32_t cp = text::decode(s, i);
    if (text::is_space(cp)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else if (text::is_cjk(cp)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
      tokens.emplace_back(s.substr(at, i - at));
    } else {
      current.append(s.substr(at, i - at));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string escape_newlines(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '\n') {
      out += "\\n";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

TokenizerSpec TokenizerSpec::parse_flag(std::string_view flag) {
  TokenizerSpec spec;
  if (flag == "whitespace") {
    spec.kind = Kind::whitespace;
  } else if (flag == "intl") {
    spec.kind = Kind::intl;
  } else if (flag == "char-cjk") {
    spec.kind = Kind::char_cjk;
  } else if (flag.rfind("external:", 0) == 0) {
    spec.kind = Kind::external;
    spec.command = std::string(flag.substr(9));
    if (spec.command.empty())
      throw ValidationError("--tokenizer external: requires a command");
  } else {
    throw ValidationError("unknown tokenizer: " + std::string(flag) +
                          " (expected whitespace|intl|char-cjk|external:<cmd>)");
  }
  return spec;
}

std::string TokenizerSpec::flag() const {
  switch (kind) {
    case Kind::whitespace:
      return "whitespace";
    case Kind::intl:
      return "intl";
    case Kind::char_cjk:
      return "char-cjk";
    case Kind::external:
      return "external:" + command;
  }
  return "whitespace";
}

ExternalTokenizerFailure::ExternalTokenizerFailure(const std::string& detail,
                                                   std::optional<int> code)
    : ValidationError("external tokenizer failure: " + detail +
                      (code ? " (exit code " + std::to_string(*code) + ")" : "")),
      exit_code(code) {}

Tokenizer::Tokenizer(TokenizerSpec spec) : spec_(std::move(spec)) {
  if (spec_.kind == Kind::external && spec_.command.empty())
    throw ValidationError("external tokenizer requires a nonempty command");
}

Tokenizer::~Tokenizer() = default;

TokenSequence Tokenizer::tokenize(std::string_view s) {
  switch (spec_.kind) {
    case Kind::whitespace:
      return tokenize_whitespace(s);
    case Kind::intl:
      return tokenize_intl(s);
    case Kind::char_cjk:
      return tokenize_char_cjk(s);
    case Kind::external:
      break;
  }
  std::lock_guard<std::mutex> lock(mu_);
  if (!proc_) proc_ = std::make_unique<Subprocess>(spec_.command);
  if (!proc_->write_line(escape_newlines(std::string(s)))) {
    const int code = proc_->wait();
    proc_.reset();
    throw ExternalTokenizerFailure("child closed stdin pipe", code);
  }
  std::string reply;
  if (!proc_->read_line(reply)) {
    const int code = proc_->wait();
    proc_.reset();
    throw ExternalTokenizerFailure("no reply line before EOF", code);
  }
  TokenSequence tokens;
  if (reply.empty()) return tokens;
  std::size_t begin = 0;
  while (begin <= reply.size()) {
    const std::size_t space = reply.find(' ', begin);
    const std::string piece = reply.substr(
        begin, space == std::string::npos ? std::string::npos : space - begin);
    if (piece.empty())
      throw ExternalTokenizerFailure("empty token in reply (stray space)", std::nullopt);
    tokens.push_back(piece);
    if (space == std::string::npos) break;
    begin = space + 1;
  }
  return tokens;
}

std::size_t Tokenizer::count(std::string_view text) { return tokenize(text).size(); }

TokenSequence tokenize(std::string_view text, const TokenizerSpec& spec) {
  Tokenizer tokenizer(spec);
  return tokenizer.tokenize(text);
}

std::size_t count_tokens(std::string_view text, const TokenizerSpec& spec) {
  return tokenize(text, spec).size();
}

}  // namespace docmt::tok
