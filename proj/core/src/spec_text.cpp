#include "inkwarp/spec_text.hpp"

#include "inkwarp/error.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace inkwarp::text {
namespace {

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  Call parse_all() {
    Call call = parse_expr();
    skip_ws();
    if (pos_ != src_.size())
      fail("unexpected trailing text");
    return call;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidSpec(what + " at offset " + std::to_string(pos_) + " near '" +
                      std::string(src_.substr(pos_, 12)) + "'");
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      fail(std::string("expected '") + c + "'");
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    if (start == pos_)
      fail("expected identifier");
    return std::string(src_.substr(start, pos_ - start));
  }

  std::string value() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-' ||
          c == '+')
        ++pos_;
      else
        break;
    }
    if (start == pos_)
      fail("expected value");
    return std::string(src_.substr(start, pos_ - start));
  }

  Call parse_expr() {
    skip_ws();
    Call call;
    call.offset = pos_;
    call.name = identifier();
    if (call.name == "compose") {
      expect('[');
      do {
        call.children.push_back(parse_expr());
      } while (accept(';'));
      expect(']');
      return call;
    }
    expect('(');
    if (accept(')'))
      return call;
    do {
      std::string key = identifier();
      expect('=');
      call.args.emplace_back(std::move(key), value());
    } while (accept(','));
    expect(')');
    return call;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

} // namespace

Call parse(std::string_view source) {
  return Parser(source).parse_all();
}

ArgReader::ArgReader(const Call& call) : call_(call), used_(call.args.size(), false) {
  for (std::size_t i = 0; i < call.args.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (call.args[i].first == call.args[j].first)
        throw InvalidSpec("duplicate argument '" + call.args[i].first + "' in " + call.name +
                          "()");
}

const std::string* ArgReader::take(std::string_view key) {
  for (std::size_t i = 0; i < call_.args.size(); ++i)
    if (call_.args[i].first == key) {
      used_[i] = true;
      return &call_.args[i].second;
    }
  return nullptr;
}

bool ArgReader::has(std::string_view key) const {
  for (const auto& [k, v] : call_.args)
    if (k == key)
      return true;
  return false;
}

double ArgReader::number(std::string_view key, double fallback) {
  const std::string* v = take(key);
  if (!v)
    return fallback;
  double out = 0;
  const char* first = v->data();
  const char* last = v->data() + v->size();
  if (*first == '+')
    ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out))
    throw InvalidSpec("argument '" + std::string(key) + "' of " + call_.name +
                      "() is not a finite number: '" + *v + "'");
  return out;
}

std::uint64_t ArgReader::integer(std::string_view key, std::uint64_t fallback) {
  const std::string* v = take(key);
  if (!v)
    return fallback;
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size())
    throw InvalidSpec("argument '" + std::string(key) + "' of " + call_.name +
                      "() is not an unsigned integer: '" + *v + "'");
  return out;
}

bool ArgReader::flag(std::string_view key, bool fallback) {
  const std::string* v = take(key);
  if (!v)
    return fallback;
  if (*v == "true" || *v == "1")
    return true;
  if (*v == "false" || *v == "0")
    return false;
  throw InvalidSpec("argument '" + std::string(key) + "' of " + call_.name +
                    "() must be true or false, got '" + *v + "'");
}

std::string ArgReader::word(std::string_view key, std::string fallback) {
  const std::string* v = take(key);
  return v ? *v : fallback;
}

void ArgReader::finish() const {
  for (std::size_t i = 0; i < used_.size(); ++i)
    if (!used_[i])
      throw InvalidSpec("unknown argument '" + call_.args[i].first + "' in " + call_.name +
                        "()");
}

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc())
    throw Error("format_number: conversion failed");
  return std::string(buf.data(), ptr);
}

} // namespace inkwarp::text
