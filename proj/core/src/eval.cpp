#include <cmath>

#include "expr_node.hpp"
#include "stabgen/error.hpp"
#include "stabgen/expr.hpp"

namespace stabgen {
namespace {

[[noreturn]] void singular(const char* what) { throw Error(ErrorKind::kEvalSingular, what); }

Complex checked(Complex v) {
  const double re = v.real();
  const double im = v.imag();
  if (std::isnan(re) || std::isnan(im)) singular("undefined value");
  if (std::isinf(re) || std::isinf(im)) throw Error(ErrorKind::kEvalOverflow, "infinite value");
  if ((std::fabs(re) > 0.7e100 || std::fabs(im) > 0.7e100) && std::abs(v) > kOverflowMagnitude) {
    throw Error(ErrorKind::kEvalOverflow, "magnitude above 1e100");
  }
  return v;
}

Complex apply_binary(BinaryOp op, Complex a, Complex b) {
  switch (op) {
    case BinaryOp::kAdd: return checked(a + b);
    case BinaryOp::kSub: return checked(a - b);
    case BinaryOp::kMul: return checked(a * b);
    case BinaryOp::kDiv:
      if (std::abs(b) < kTinyDenominator) singular("division by zero");
      return checked(a / b);
  }
  singular("unknown binary operator");
}

// On the cut (1, inf) asin/acos take the limit from below, so asin(9) =
// pi/2 - i acosh(9). std:: would follow the sign of the zero imaginary part.
Complex below_upper_cut(Complex z) {
  return z.imag() == 0 && z.real() > 1 ? Complex(z.real(), -0.0) : z;
}

Complex apply_unary(UnaryOp op, Complex z) {
  switch (op) {
    case UnaryOp::kExp:
      if (z.real() > 231.0) throw Error(ErrorKind::kEvalOverflow, "exp overflow");
      return checked(std::exp(z));
    case UnaryOp::kLog:
      if (std::abs(z) < kTinyDenominator) singular("log(0)");
      return checked(std::log(z));
    case UnaryOp::kSqrt: return checked(std::sqrt(z));
    case UnaryOp::kSin: return checked(std::sin(z));
    case UnaryOp::kCos: return checked(std::cos(z));
    case UnaryOp::kTan:
      if (std::abs(std::cos(z)) < kTanPoleDistance) singular("tan pole");
      return checked(std::tan(z));
    case UnaryOp::kAsin: return checked(std::asin(below_upper_cut(z)));
    case UnaryOp::kAcos: return checked(std::acos(below_upper_cut(z)));
    case UnaryOp::kAtan:
      if (std::abs(z - Complex(0, 1)) < kTinyDenominator ||
          std::abs(z + Complex(0, 1)) < kTinyDenominator) {
        singular("atan pole");
      }
      return checked(std::atan(z));
  }
  singular("unknown unary operator");
}

Complex leaf_value(const detail::Node& n, const Assignment& assignment) {
  switch (n.kind) {
    case Expr::Kind::kInt: return Complex(static_cast<double>(n.int_value), 0.0);
    case Expr::Kind::kConst: return checked(n.const_value);
    case Expr::Kind::kVar: {
      const Var v = Var::from_id(n.var_id);
      if (!assignment.has(v)) {
        throw Error(ErrorKind::kInvalidArgument, "unassigned variable " + v.name());
      }
      return checked(assignment.get(v));
    }
    default: break;
  }
  singular("not a leaf");
}

Complex eval_node(const detail::Node& n, const Assignment& assignment) {
  switch (n.kind) {
    case Expr::Kind::kUnary:
      return apply_unary(static_cast<UnaryOp>(n.op), eval_node(*n.a.node(), assignment));
    case Expr::Kind::kBinary: {
      const Complex a = eval_node(*n.a.node(), assignment);
      const Complex b = eval_node(*n.b.node(), assignment);
      return apply_binary(static_cast<BinaryOp>(n.op), a, b);
    }
    default: return leaf_value(n, assignment);
  }
}

}  // namespace

Complex eval_complex(const Expr& e, const Assignment& assignment) {
  if ((e.var_mask() & ~assignment.mask()) != 0) {
    throw Error(ErrorKind::kInvalidArgument, "assignment does not cover all free variables");
  }
  return eval_node(*e.node(), assignment);
}

Complex Evaluator::operator()(const Expr& e) {
  const detail::Node& n = *e.node();
  if (e.is_leaf()) return leaf_value(n, assignment_);
  if (auto it = cache_.find(&n); it != cache_.end()) return it->second;
  Complex value;
  if (n.kind == Expr::Kind::kUnary) {
    value = apply_unary(static_cast<UnaryOp>(n.op), (*this)(n.a));
  } else {
    const Complex a = (*this)(n.a);
    const Complex b = (*this)(n.b);
    value = apply_binary(static_cast<BinaryOp>(n.op), a, b);
  }
  cache_.emplace(&n, value);
  return value;
}

Expr constant_fold(const Expr& e) {
  if (e.is_leaf()) return e;
  if (e.var_mask() == 0) {
    try {
      return Expr::constant(eval_complex(e, Assignment{}));
    } catch (const Error&) {
      // Not evaluable as a whole; fold what can be folded below.
    }
  }
  if (e.kind() == Expr::Kind::kUnary) {
    Expr child = constant_fold(e.child());
    if (child.node() == e.child().node()) return e;
    return Expr::unary(e.unary_op(), std::move(child));
  }
  Expr left = constant_fold(e.left());
  Expr right = constant_fold(e.right());
  if (left.node() == e.left().node() && right.node() == e.right().node()) return e;
  return Expr::binary(e.binary_op(), std::move(left), std::move(right));
}

}  // namespace stabgen
