#include "haantjes/toml_lite.hpp"

#include <cctype>
#include <charconv>

#include "haantjes/errors.hpp"

namespace haantjes::toml {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Table parse() {
    Table root;
    Table* current = &root;
    for (;;) {
      skip_blank_lines();
      if (pos_ >= text_.size()) break;
      if (peek() == '[') {
        ++pos_;
        const auto path = key_path();
        skip_inline_space();
        expect(']');
        current = &open_table(root, path);
      } else {
        const std::size_t key_offset = pos_;
        const auto path = key_path();
        skip_inline_space();
        expect('=');
        skip_inline_space();
        Value v = value();
        Table* target = current;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) target = &child_table(*target, path[i], key_offset);
        if (target->count(path.back())) fail("duplicate key '" + path.back() + "'", key_offset);
        (*target)[path.back()] = std::move(v);
      }
      end_of_line();
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message, std::size_t offset) const {
    throw ParseError(message, offset);
  }
  [[noreturn]] void fail_expected(const std::string& message, std::vector<std::string> expected) const {
    throw ParseError(message, pos_, std::move(expected));
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    if (peek() != c) fail_expected(std::string("expected '") + c + "'", {std::string(1, c)});
    ++pos_;
  }

  void skip_inline_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#') {
      while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    }
  }

  void skip_blank_lines() {
    for (;;) {
      skip_inline_space();
      skip_comment();
      if (peek() == '\n') {
        ++pos_;
        continue;
      }
      return;
    }
  }

  // Whitespace, comments and newlines inside arrays.
  void skip_array_space() {
    for (;;) {
      skip_inline_space();
      skip_comment();
      if (peek() == '\n') {
        ++pos_;
        continue;
      }
      return;
    }
  }

  void end_of_line() {
    skip_inline_space();
    skip_comment();
    if (pos_ >= text_.size()) return;
    if (peek() != '\n') fail_expected("unexpected text after value", {"newline"});
    ++pos_;
  }

  std::vector<std::string> key_path() {
    std::vector<std::string> path;
    for (;;) {
      skip_inline_space();
      path.push_back(key());
      skip_inline_space();
      if (peek() != '.') return path;
      ++pos_;
    }
  }

  std::string key() {
    if (peek() == '"') return basic_string();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '-')) {
      ++pos_;
    }
    if (start == pos_) fail_expected("expected a key", {"key"});
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string basic_string() {
    const std::size_t start = pos_;
    expect('"');
    std::string out;
    for (;;) {
      if (pos_ >= text_.size() || text_[pos_] == '\n') fail("unterminated string", start);
      const char c = text_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos_ >= text_.size()) fail("unterminated string", start);
      const char e = text_[pos_++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(std::string("unsupported escape \\") + e, pos_ - 2);
      }
    }
  }

  Value value() {
    Value v;
    v.offset = pos_;
    const char c = peek();
    if (c == '"') {
      v.data = basic_string();
    } else if (c == '[') {
      ++pos_;
      Array items;
      for (;;) {
        skip_array_space();
        if (peek() == ']') {
          ++pos_;
          break;
        }
        items.push_back(value());
        skip_array_space();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ']') {
          ++pos_;
          break;
        }
        fail_expected("malformed array", {",", "]"});
      }
      v.data = std::move(items);
    } else if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      v.data = true;
    } else if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      v.data = false;
    } else {
      const std::size_t start = pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                                     text_[pos_] == '_' ||
                                     ((text_[pos_] == '+' || text_[pos_] == '-') &&
                                      (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
        ++pos_;
      }
      std::string token(text_.substr(start, pos_ - start));
      std::erase(token, '_');
      if (!token.empty() && token[0] == '+') token.erase(0, 1);
      double number = 0.0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), number);
      if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        pos_ = start;
        fail_expected("expected a value", {"string", "number", "boolean", "array"});
      }
      v.data = number;
    }
    return v;
  }

  Table& child_table(Table& parent, const std::string& name, std::size_t offset) {
    auto it = parent.find(name);
    if (it == parent.end()) {
      Value v;
      v.offset = offset;
      v.data = std::make_shared<Table>();
      it = parent.emplace(name, std::move(v)).first;
    }
    if (!it->second.is_table()) fail("key '" + name + "' is not a table", offset);
    return *std::get<std::shared_ptr<Table>>(it->second.data);
  }

  Table& open_table(Table& root, const std::vector<std::string>& path) {
    Table* t = &root;
    for (const auto& part : path) t = &child_table(*t, part, pos_);
    return *t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Table parse(std::string_view text) { return Parser(text).parse(); }

}  // namespace haantjes::toml
