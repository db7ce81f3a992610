#pragma once

// Minimal s-expression reader used for boolean condition syntax.
// Atoms are bare tokens or double-quoted strings (which may contain spaces).

#include <string>
#include <string_view>
#include <vector>

namespace motint::sexpr {

struct Value {
  bool is_list = false;
  bool quoted = false;     // atom came from a "..." literal
  std::string atom;
  std::vector<Value> items;
  std::size_t column = 0;  // 1-based
};

Value parse(std::string_view text);

std::string to_string(const Value& value);

}  // namespace motint::sexpr
