#pragma once

#include "stabgen/expr.hpp"

namespace stabgen::detail {

struct Node {
  Expr::Kind kind = Expr::Kind::kInt;
  std::uint8_t op = 0;
  std::int64_t int_value = 0;
  int var_id = 0;
  Complex const_value{};
  VarMask mask = 0;
  std::size_t size = 1;
  std::size_t ops = 0;
  // Children are only meaningful for unary (a) and binary (a, b) nodes.
  Expr a{Expr::NullTag{}};
  Expr b{Expr::NullTag{}};
};

}  // namespace stabgen::detail
