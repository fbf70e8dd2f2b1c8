#include "stabgen/expr.hpp"

#include <cstdio>
#include <limits>

#include "expr_node.hpp"
#include "stabgen/error.hpp"

namespace stabgen {

std::string_view name(BinaryOp op) noexcept {
  switch (op) {
    case BinaryOp::kAdd: return "add";
    case BinaryOp::kSub: return "sub";
    case BinaryOp::kMul: return "mul";
    case BinaryOp::kDiv: return "div";
  }
  return "?";
}

std::string_view name(UnaryOp op) noexcept {
  switch (op) {
    case UnaryOp::kExp: return "exp";
    case UnaryOp::kLog: return "log";
    case UnaryOp::kSqrt: return "sqrt";
    case UnaryOp::kSin: return "sin";
    case UnaryOp::kCos: return "cos";
    case UnaryOp::kTan: return "tan";
    case UnaryOp::kAsin: return "asin";
    case UnaryOp::kAcos: return "acos";
    case UnaryOp::kAtan: return "atan";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Var

Var Var::state(int index) {
  if (index < 0 || index >= kMaxState) {
    throw Error(ErrorKind::kInvalidArgument, "state variable index out of range");
  }
  return Var(index);
}

Var Var::control(int index) {
  if (index < 0 || index >= kMaxControl) {
    throw Error(ErrorKind::kInvalidArgument, "control variable index out of range");
  }
  return Var(kMaxState + index);
}

Var Var::from_id(int id) {
  if (id < 0 || id >= kCount) {
    throw Error(ErrorKind::kInvalidArgument, "variable id out of range");
  }
  return Var(id);
}

std::optional<Var> Var::from_name(std::string_view text) noexcept {
  if (text == "t") return time();
  if (text.size() != 2 || text[1] < '0' || text[1] > '9') return std::nullopt;
  const int index = text[1] - '0';
  if (text[0] == 'x' && index < kMaxState) return Var(index);
  if (text[0] == 'u' && index < kMaxControl) return Var(kMaxState + index);
  return std::nullopt;
}

Var::Kind Var::kind() const noexcept {
  if (id_ < kMaxState) return Kind::kState;
  if (id_ < kMaxState + kMaxControl) return Kind::kControl;
  return Kind::kTime;
}

int Var::index() const noexcept {
  switch (kind()) {
    case Kind::kState: return id_;
    case Kind::kControl: return id_ - kMaxState;
    case Kind::kTime: return 0;
  }
  return 0;
}

std::string Var::name() const {
  switch (kind()) {
    case Kind::kState: return "x" + std::to_string(index());
    case Kind::kControl: return "u" + std::to_string(index());
    case Kind::kTime: return "t";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Expr

namespace {

std::size_t saturating_add(std::size_t a, std::size_t b) noexcept {
  const std::size_t max = std::numeric_limits<std::size_t>::max();
  return a > max - b ? max : a + b;
}

}  // namespace

Expr::Expr() {
  static const std::shared_ptr<const detail::Node> zero = [] {
    auto node = std::make_shared<detail::Node>();
    node->kind = Kind::kInt;
    node->int_value = 0;
    return std::shared_ptr<const detail::Node>(std::move(node));
  }();
  node_ = zero;
}

Expr Expr::integer(std::int64_t value) {
  if (value == 0) return Expr();
  auto node = std::make_shared<detail::Node>();
  node->kind = Kind::kInt;
  node->int_value = value;
  return Expr(std::move(node));
}

Expr Expr::variable(Var v) {
  auto node = std::make_shared<detail::Node>();
  node->kind = Kind::kVar;
  node->var_id = v.id();
  node->mask = mask_of(v);
  return Expr(std::move(node));
}

Expr Expr::constant(Complex value) {
  auto node = std::make_shared<detail::Node>();
  node->kind = Kind::kConst;
  node->const_value = value;
  return Expr(std::move(node));
}

Expr Expr::unary(UnaryOp op, Expr child) {
  auto node = std::make_shared<detail::Node>();
  node->kind = Kind::kUnary;
  node->op = static_cast<std::uint8_t>(op);
  node->mask = child.var_mask();
  node->size = saturating_add(child.size(), 1);
  node->ops = saturating_add(child.op_count(), 1);
  node->a = std::move(child);
  return Expr(std::move(node));
}

Expr Expr::binary(BinaryOp op, Expr left, Expr right) {
  auto node = std::make_shared<detail::Node>();
  node->kind = Kind::kBinary;
  node->op = static_cast<std::uint8_t>(op);
  node->mask = left.var_mask() | right.var_mask();
  node->size = saturating_add(saturating_add(left.size(), right.size()), 1);
  node->ops = saturating_add(saturating_add(left.op_count(), right.op_count()), 1);
  node->a = std::move(left);
  node->b = std::move(right);
  return Expr(std::move(node));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }

BinaryOp Expr::binary_op() const {
  if (kind() != Kind::kBinary) throw Error(ErrorKind::kInvalidArgument, "not a binary node");
  return static_cast<BinaryOp>(node_->op);
}

UnaryOp Expr::unary_op() const {
  if (kind() != Kind::kUnary) throw Error(ErrorKind::kInvalidArgument, "not a unary node");
  return static_cast<UnaryOp>(node_->op);
}

std::int64_t Expr::int_value() const {
  if (kind() != Kind::kInt) throw Error(ErrorKind::kInvalidArgument, "not an integer leaf");
  return node_->int_value;
}

Var Expr::var() const {
  if (kind() != Kind::kVar) throw Error(ErrorKind::kInvalidArgument, "not a variable leaf");
  return Var::from_id(node_->var_id);
}

Complex Expr::const_value() const {
  if (kind() != Kind::kConst) throw Error(ErrorKind::kInvalidArgument, "not a constant leaf");
  return node_->const_value;
}

const Expr& Expr::child() const {
  if (kind() != Kind::kUnary) throw Error(ErrorKind::kInvalidArgument, "not a unary node");
  return node_->a;
}

const Expr& Expr::left() const {
  if (kind() != Kind::kBinary) throw Error(ErrorKind::kInvalidArgument, "not a binary node");
  return node_->a;
}

const Expr& Expr::right() const {
  if (kind() != Kind::kBinary) throw Error(ErrorKind::kInvalidArgument, "not a binary node");
  return node_->b;
}

bool Expr::is_int(std::int64_t value) const noexcept {
  return node_->kind == Kind::kInt && node_->int_value == value;
}

VarMask Expr::var_mask() const noexcept { return node_->mask; }
std::size_t Expr::size() const noexcept { return node_->size; }
std::size_t Expr::op_count() const noexcept { return node_->ops; }

bool operator==(const Expr& a, const Expr& b) {
  const detail::Node* x = a.node();
  const detail::Node* y = b.node();
  if (x == y) return true;
  if (x->kind != y->kind || x->mask != y->mask || x->size != y->size) return false;
  switch (x->kind) {
    case Expr::Kind::kInt: return x->int_value == y->int_value;
    case Expr::Kind::kVar: return x->var_id == y->var_id;
    case Expr::Kind::kConst: return x->const_value == y->const_value;
    case Expr::Kind::kUnary: return x->op == y->op && x->a == y->a;
    case Expr::Kind::kBinary: return x->op == y->op && x->a == y->a && x->b == y->b;
  }
  return false;
}

Expr operator+(Expr a, Expr b) { return Expr::binary(BinaryOp::kAdd, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(BinaryOp::kSub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(BinaryOp::kMul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary(BinaryOp::kDiv, std::move(a), std::move(b)); }
Expr exp(Expr e) { return Expr::unary(UnaryOp::kExp, std::move(e)); }
Expr log(Expr e) { return Expr::unary(UnaryOp::kLog, std::move(e)); }
Expr sqrt(Expr e) { return Expr::unary(UnaryOp::kSqrt, std::move(e)); }
Expr sin(Expr e) { return Expr::unary(UnaryOp::kSin, std::move(e)); }
Expr cos(Expr e) { return Expr::unary(UnaryOp::kCos, std::move(e)); }
Expr tan(Expr e) { return Expr::unary(UnaryOp::kTan, std::move(e)); }
Expr asin(Expr e) { return Expr::unary(UnaryOp::kAsin, std::move(e)); }
Expr acos(Expr e) { return Expr::unary(UnaryOp::kAcos, std::move(e)); }
Expr atan(Expr e) { return Expr::unary(UnaryOp::kAtan, std::move(e)); }

namespace {

void append_infix(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Expr::Kind::kInt:
      if (e.int_value() < 0) {
        out += "(" + std::to_string(e.int_value()) + ")";
      } else {
        out += std::to_string(e.int_value());
      }
      return;
    case Expr::Kind::kVar:
      out += e.var().name();
      return;
    case Expr::Kind::kConst: {
      char buf[64];
      const Complex c = e.const_value();
      if (c.imag() == 0.0) {
        std::snprintf(buf, sizeof buf, "%.6g", c.real());
        out += c.real() < 0 ? "(" + std::string(buf) + ")" : std::string(buf);
      } else {
        std::snprintf(buf, sizeof buf, "(%.6g%+.6gi)", c.real(), c.imag());
        out += buf;
      }
      return;
    }
    case Expr::Kind::kUnary:
      out += name(e.unary_op());
      out += '(';
      append_infix(e.child(), out);
      out += ')';
      return;
    case Expr::Kind::kBinary: {
      static constexpr std::string_view kSymbols[] = {" + ", " - ", " * ", " / "};
      out += '(';
      append_infix(e.left(), out);
      out += kSymbols[static_cast<int>(e.binary_op())];
      append_infix(e.right(), out);
      out += ')';
      return;
    }
  }
}

}  // namespace

std::string to_infix(const Expr& e) {
  std::string out;
  append_infix(e, out);
  return out;
}

Expr substitute(const Expr& e, const std::array<std::optional<Expr>, Var::kCount>& replacement) {
  VarMask replaced = 0;
  for (int id = 0; id < Var::kCount; ++id) {
    if (replacement[static_cast<std::size_t>(id)]) replaced |= mask_of(Var::from_id(id));
  }
  struct Walker {
    const std::array<std::optional<Expr>, Var::kCount>& repl;
    VarMask replaced;
    Expr operator()(const Expr& x) const {
      if ((x.var_mask() & replaced) == 0) return x;
      switch (x.kind()) {
        case Expr::Kind::kVar: return *repl[static_cast<std::size_t>(x.var().id())];
        case Expr::Kind::kUnary: return Expr::unary(x.unary_op(), (*this)(x.child()));
        case Expr::Kind::kBinary:
          return Expr::binary(x.binary_op(), (*this)(x.left()), (*this)(x.right()));
        default: return x;
      }
    }
  };
  return Walker{replacement, replaced}(e);
}

}  // namespace stabgen
