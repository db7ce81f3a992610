#pragma once

// Infix expression syntax shared by every textual literal in the project:
// integers, identifiers, + - * / ^ and parentheses. The parser only builds
// the tree; each consumer evaluates it into its own ring and decides which
// identifiers and divisions are legal.

#include <gmpxx.h>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace motint::expr {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class Kind { Number, Symbol, Add, Sub, Neg, Mul, Div, Pow };

struct Node {
  Kind kind;
  std::size_t column;  // 1-based offset into the parsed text
  mpz_class number;    // Kind::Number
  std::string symbol;  // Kind::Symbol
  long exponent = 0;   // Kind::Pow (may be negative)
  std::vector<NodePtr> children;
};

/// Parses a complete infix expression. Throws ParseError (line 0) on any
/// syntax problem, including trailing input.
NodePtr parse(std::string_view text);

[[noreturn]] void fail(const Node& at, const std::string& message);

}  // namespace motint::expr
