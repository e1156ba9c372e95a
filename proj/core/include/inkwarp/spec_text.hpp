#pragma once

// Shared lexer/parser for the compact transform text form:
//
//   expr  := name '(' [arg (',' arg)*] ')'
//          | 'compose' '[' expr (';' expr)* ']'
//   arg   := key '=' value
//
// Names and keys are lowercase identifiers; values are numbers or bare words
// (true, false, disk, square). Whitespace is ignored between tokens.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace inkwarp::text {

struct Call {
  std::string name;
  std::vector<std::pair<std::string, std::string>> args;
  std::vector<Call> children; // only for compose
  std::size_t offset = 0;     // position of `name` in the source text
};

/// Throws InvalidSpec naming the offending token and its offset.
Call parse(std::string_view source);

/// Typed access to a Call's arguments; rejects unknown and duplicate keys.
class ArgReader {
public:
  explicit ArgReader(const Call& call);

  double number(std::string_view key, double fallback);
  bool flag(std::string_view key, bool fallback);
  std::uint64_t integer(std::string_view key, std::uint64_t fallback);
  std::string word(std::string_view key, std::string fallback);
  bool has(std::string_view key) const;

  /// Throws InvalidSpec if any argument was never read.
  void finish() const;

private:
  const std::string* take(std::string_view key);

  const Call& call_;
  std::vector<bool> used_;
};

/// Shortest decimal text that parses back to exactly `v`.
std::string format_number(double v);

} // namespace inkwarp::text
