#include "motint/expr.hpp"

#include <cctype>

#include "motint/error.hpp"

namespace motint::expr {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr run() {
    auto root = parse_sum();
    skip_space();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void error(const std::string& message) const {
    throw ParseError(0, pos_ + 1, message);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr make(Kind kind, std::size_t column, std::vector<NodePtr> children = {}) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->column = column;
    node->children = std::move(children);
    return node;
  }

  NodePtr parse_sum() {
    auto lhs = parse_product();
    while (true) {
      skip_space();
      std::size_t column = pos_ + 1;
      if (accept('+')) {
        lhs = make(Kind::Add, column, {lhs, parse_product()});
      } else if (accept('-')) {
        lhs = make(Kind::Sub, column, {lhs, parse_product()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    auto lhs = parse_unary();
    while (true) {
      skip_space();
      std::size_t column = pos_ + 1;
      if (accept('*')) {
        lhs = make(Kind::Mul, column, {lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = make(Kind::Div, column, {lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    skip_space();
    std::size_t column = pos_ + 1;
    if (accept('-')) return make(Kind::Neg, column, {parse_unary()});
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    auto base = parse_primary();
    skip_space();
    std::size_t column = pos_ + 1;
    if (!accept('^')) return base;
    skip_space();
    bool negative = false;
    if (accept('-')) negative = true;
    skip_space();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      error("exponent must be an integer literal");
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ - start > 9) error("exponent too large");
    long value = std::stol(std::string(text_.substr(start, pos_ - start)));
    auto node = std::make_shared<Node>();
    node->kind = Kind::Pow;
    node->column = column;
    node->exponent = negative ? -value : value;
    node->children = {base};
    return node;
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) error("unexpected end of expression");
    std::size_t column = pos_ + 1;
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = parse_sum();
      if (!accept(')')) error("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      auto node = std::make_shared<Node>();
      node->kind = Kind::Number;
      node->column = column;
      node->number = mpz_class(std::string(text_.substr(start, pos_ - start)));
      return node;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      auto node = std::make_shared<Node>();
      node->kind = Kind::Symbol;
      node->column = column;
      node->symbol = std::string(text_.substr(start, pos_ - start));
      return node;
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

NodePtr parse(std::string_view text) { return Parser(text).run(); }

void fail(const Node& at, const std::string& message) { throw ParseError(0, at.column, message); }

}  // namespace motint::expr
