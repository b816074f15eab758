#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docmt/error.hpp"
#include "docmt/subprocess.hpp"

namespace docmt::tok {

// Token counting is tokenizer-relative: every budget in this toolkit is a
// count under one of these specs, not under any particular model vocabulary.
enum class Kind { whitespace, intl, char_cjk, external };

struct TokenizerSpec {
  Kind kind = Kind::whitespace;
  std::string command;  // external only

  // Parses "whitespace" | "intl" | "char-cjk" | "external:<cmd>".
  static TokenizerSpec parse_flag(std::string_view flag);
  std::string flag() const;
};

using TokenSequence = std::vector<std::string>;

class ExternalTokenizerFailure : public ValidationError {
 public:
  ExternalTokenizerFailure(const std::string& detail, std::optional<int> exit_code);
  std::optional<int> exit_code;
};

// Stateful handle so the external adapter keeps one child process alive
// across calls. Built-in modes carry no state; the handle is just a
// convenient way to pass a spec around hot loops.
//
// External wire protocol (line-delimited UTF-8 over stdin/stdout):
//   request  = the text, with internal newlines escaped as the two
//              characters `\` `n`, terminated by '\n'
//   reply    = the tokens joined by single spaces; an empty line means
//              zero tokens; the child must flush after every reply
class Tokenizer {
 public:
  explicit Tokenizer(TokenizerSpec spec);
  ~Tokenizer();

  TokenSequence tokenize(std::string_view text);
  std::size_t count(std::string_view text);
  const TokenizerSpec& spec() const { return spec_; }

 private:
  TokenizerSpec spec_;
  std::unique_ptr<Subprocess> proc_;
  std::mutex mu_;  // one request/reply in flight per child
};

TokenSequence tokenize(std::string_view text, const TokenizerSpec& spec);
std::size_t count_tokens(std::string_view text, const TokenizerSpec& spec);

}  // namespace docmt::tok
