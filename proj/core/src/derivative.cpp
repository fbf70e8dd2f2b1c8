#include <unordered_map>

#include "stabgen/expr.hpp"

namespace stabgen {
namespace {

// Product with a derivative factor; d/dv v = 1 is the only factor elided.
Expr times(Expr factor, Expr derivative) {
  if (derivative.is_int(1)) return factor;
  return std::move(factor) * std::move(derivative);
}

Expr negate(Expr e) { return Expr() - std::move(e); }

// Memo keyed by node so shared subtrees (Kalman iterates) are differentiated once.
using Memo = std::unordered_map<const detail::Node*, Expr>;

Expr d(const Expr& e, Var v, Memo& memo);

Expr d_unary(const Expr& e, Var v, Memo& memo) {
  const Expr& u = e.child();
  Expr du = d(u, v, memo);
  switch (e.unary_op()) {
    case UnaryOp::kExp: return times(e, std::move(du));
    case UnaryOp::kLog: return std::move(du) / u;
    case UnaryOp::kSqrt: return std::move(du) / (Expr::integer(2) * e);
    case UnaryOp::kSin: return times(cos(u), std::move(du));
    case UnaryOp::kCos: return negate(times(sin(u), std::move(du)));
    case UnaryOp::kTan: return std::move(du) / (cos(u) * cos(u));
    case UnaryOp::kAsin: return std::move(du) / sqrt(Expr::integer(1) - u * u);
    case UnaryOp::kAcos: return negate(std::move(du) / sqrt(Expr::integer(1) - u * u));
    case UnaryOp::kAtan: return std::move(du) / (Expr::integer(1) + u * u);
  }
  return Expr();
}

Expr d_binary(const Expr& e, Var v, Memo& memo) {
  const Expr& a = e.left();
  const Expr& b = e.right();
  const bool da_live = a.depends_on(v);
  const bool db_live = b.depends_on(v);
  switch (e.binary_op()) {
    case BinaryOp::kAdd:
      if (!da_live) return d(b, v, memo);
      if (!db_live) return d(a, v, memo);
      return d(a, v, memo) + d(b, v, memo);
    case BinaryOp::kSub:
      if (!da_live) return negate(d(b, v, memo));
      if (!db_live) return d(a, v, memo);
      return d(a, v, memo) - d(b, v, memo);
    case BinaryOp::kMul:
      if (!da_live) return times(a, d(b, v, memo));
      if (!db_live) return times(b, d(a, v, memo));
      return times(b, d(a, v, memo)) + times(a, d(b, v, memo));
    case BinaryOp::kDiv:
      if (!db_live) return d(a, v, memo) / b;
      if (!da_live) return negate(times(a, d(b, v, memo)) / (b * b));
      return (times(b, d(a, v, memo)) - times(a, d(b, v, memo))) / (b * b);
  }
  return Expr();
}

Expr d(const Expr& e, Var v, Memo& memo) {
  if (!e.depends_on(v)) return Expr();
  switch (e.kind()) {
    case Expr::Kind::kVar: return Expr::integer(1);
    case Expr::Kind::kUnary:
    case Expr::Kind::kBinary: {
      if (auto it = memo.find(e.node()); it != memo.end()) return it->second;
      Expr out = e.kind() == Expr::Kind::kUnary ? d_unary(e, v, memo) : d_binary(e, v, memo);
      memo.emplace(e.node(), out);
      return out;
    }
    default: return Expr();
  }
}

}  // namespace

Expr differentiate(const Expr& e, Var v) {
  Memo memo;
  return d(e, v, memo);
}

}  // namespace stabgen
