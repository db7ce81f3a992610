#include "motint/sexpr.hpp"

#include <cctype>

#include "motint/error.hpp"

namespace motint::sexpr {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Value run() {
    Value v = read();
    skip_space();
    if (pos_ != text_.size()) throw ParseError(0, pos_ + 1, "trailing input after condition");
    return v;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Value read() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError(0, pos_ + 1, "unexpected end of condition");
    Value v;
    v.column = pos_ + 1;
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      v.is_list = true;
      while (true) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError(0, v.column, "unbalanced '('");
        if (text_[pos_] == ')') {
          ++pos_;
          return v;
        }
        v.items.push_back(read());
      }
    }
    if (c == ')') throw ParseError(0, pos_ + 1, "unexpected ')'");
    if (c == '"') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') ++pos_;
      if (pos_ >= text_.size()) throw ParseError(0, v.column, "unterminated string");
      v.atom = std::string(text_.substr(start, pos_ - start));
      v.quoted = true;
      ++pos_;
      return v;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != '"')
      ++pos_;
    v.atom = std::string(text_.substr(start, pos_ - start));
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Value parse(std::string_view text) { return Reader(text).run(); }

std::string to_string(const Value& value) {
  if (!value.is_list) return value.quoted ? "\"" + value.atom + "\"" : value.atom;
  std::string out = "(";
  for (std::size_t i = 0; i < value.items.size(); ++i) {
    if (i) out += ' ';
    out += to_string(value.items[i]);
  }
  return out + ")";
}

}  // namespace motint::sexpr
