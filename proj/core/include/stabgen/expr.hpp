#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace stabgen {

using Complex = std::complex<double>;

enum class BinaryOp : std::uint8_t { kAdd, kSub, kMul, kDiv };
enum class UnaryOp : std::uint8_t { kExp, kLog, kSqrt, kSin, kCos, kTan, kAsin, kAcos, kAtan };

inline constexpr std::size_t kNumBinaryOps = 4;
inline constexpr std::size_t kNumUnaryOps = 9;

inline constexpr std::array<BinaryOp, kNumBinaryOps> kAllBinaryOps = {
    BinaryOp::kAdd, BinaryOp::kSub, BinaryOp::kMul, BinaryOp::kDiv};
inline constexpr std::array<UnaryOp, kNumUnaryOps> kAllUnaryOps = {
    UnaryOp::kExp, UnaryOp::kLog,  UnaryOp::kSqrt, UnaryOp::kSin, UnaryOp::kCos,
    UnaryOp::kTan, UnaryOp::kAsin, UnaryOp::kAcos, UnaryOp::kAtan};

std::string_view name(BinaryOp op) noexcept;
std::string_view name(UnaryOp op) noexcept;

/// A variable of a differential system: state x0..x8, control u0..u2, or time t.
class Var {
 public:
  enum class Kind : std::uint8_t { kState, kControl, kTime };

  static constexpr int kMaxState = 9;
  static constexpr int kMaxControl = 3;
  static constexpr int kCount = kMaxState + kMaxControl + 1;

  static Var state(int index);
  static Var control(int index);
  static Var time() noexcept { return Var(kMaxState + kMaxControl); }
  static Var from_id(int id);
  static std::optional<Var> from_name(std::string_view text) noexcept;

  Kind kind() const noexcept;
  int index() const noexcept;
  /// Dense id in [0, kCount): states first, then controls, then time.
  constexpr int id() const noexcept { return id_; }
  std::string name() const;

  friend bool operator==(Var, Var) = default;
  friend auto operator<=>(Var, Var) = default;

 private:
  explicit constexpr Var(int id) noexcept : id_(id) {}
  int id_;
};

using VarMask = std::uint32_t;

inline constexpr VarMask mask_of(Var v) noexcept { return VarMask{1} << v.id(); }

namespace detail {
struct Node;
}

/// Immutable expression tree with structural sharing. Copies are cheap.
class Expr {
 public:
  enum class Kind : std::uint8_t { kBinary, kUnary, kInt, kVar, kConst };

  /// The default expression is the integer leaf 0.
  Expr();

  static Expr integer(std::int64_t value);
  static Expr variable(Var v);
  static Expr constant(Complex value);
  static Expr unary(UnaryOp op, Expr child);
  static Expr binary(BinaryOp op, Expr left, Expr right);

  Kind kind() const noexcept;
  BinaryOp binary_op() const;
  UnaryOp unary_op() const;
  std::int64_t int_value() const;
  Var var() const;
  Complex const_value() const;

  const Expr& child() const;
  const Expr& left() const;
  const Expr& right() const;

  bool is_leaf() const noexcept { return kind() != Kind::kBinary && kind() != Kind::kUnary; }
  bool is_int(std::int64_t value) const noexcept;

  VarMask var_mask() const noexcept;
  bool depends_on(Var v) const noexcept { return (var_mask() & mask_of(v)) != 0; }
  /// Number of nodes counted as a tree (shared subtrees counted each time).
  std::size_t size() const noexcept;
  /// Number of internal (operator) nodes counted as a tree.
  std::size_t op_count() const noexcept;

  const detail::Node* node() const noexcept { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  friend struct detail::Node;
  struct NullTag {};
  // Empty child slot of a leaf node; never escapes the node layer.
  explicit Expr(NullTag) noexcept {}
  explicit Expr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr exp(Expr e);
Expr log(Expr e);
Expr sqrt(Expr e);
Expr sin(Expr e);
Expr cos(Expr e);
Expr tan(Expr e);
Expr asin(Expr e);
Expr acos(Expr e);
Expr atan(Expr e);

/// Infix rendering for diagnostics.
std::string to_infix(const Expr& e);

/// Values for the variables of an expression. Unassigned variables are an error
/// at evaluation time.
class Assignment {
 public:
  Assignment& set(Var v, Complex value) noexcept {
    values_[static_cast<std::size_t>(v.id())] = value;
    mask_ |= mask_of(v);
    return *this;
  }
  Complex get(Var v) const noexcept { return values_[static_cast<std::size_t>(v.id())]; }
  bool has(Var v) const noexcept { return (mask_ & mask_of(v)) != 0; }
  VarMask mask() const noexcept { return mask_; }

 private:
  std::array<Complex, Var::kCount> values_{};
  VarMask mask_ = 0;
};

/// Evaluation guards.
inline constexpr double kOverflowMagnitude = 1e100;
inline constexpr double kTinyDenominator = 1e-300;
inline constexpr double kTanPoleDistance = 1e-12;

/// Complex evaluation with principal branches. Throws Error(kEvalSingular) on
/// division by (near) zero, log(0) or a tan pole, and Error(kEvalOverflow) when
/// any intermediate magnitude exceeds 1e100.
Complex eval_complex(const Expr& e, const Assignment& assignment);

/// Evaluates many expressions that share subtrees (Jacobians, Kalman iterates)
/// without re-evaluating shared nodes. Bound to one assignment.
class Evaluator {
 public:
  explicit Evaluator(const Assignment& assignment) : assignment_(assignment) {}
  Complex operator()(const Expr& e);

 private:
  Assignment assignment_;
  std::unordered_map<const detail::Node*, Complex> cache_;
};

/// Exact symbolic derivative. Subtrees that do not depend on `v` differentiate
/// to the literal 0 and are dropped from sums and products; no other rewriting
/// is applied.
Expr differentiate(const Expr& e, Var v);

/// Collapses variable-free, evaluable subtrees into constant leaves.
Expr constant_fold(const Expr& e);

/// Replaces every variable leaf `v` with `replacement[v.id()]` when present.
Expr substitute(const Expr& e, const std::array<std::optional<Expr>, Var::kCount>& replacement);

}  // namespace stabgen
