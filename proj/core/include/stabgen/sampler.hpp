#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "stabgen/config.hpp"
#include "stabgen/expr.hpp"
#include "stabgen/rng.hpp"

namespace stabgen {

/// Samples unary-binary trees uniformly over shapes with a fixed number of
/// internal nodes (Lample & Charton's D(e, n) table), then fills operators and
/// leaves independently. Caches the table; one instance per worker.
class TreeSampler {
 public:
  explicit TreeSampler(const DistributionConfig& cfg);

  Expr sample(int n_ops, std::span<const Var> vars, Rng& rng);

  /// Number of distinct shapes reachable from e empty slots with n operators
  /// still to place.
  double shapes(int e, int n);

 private:
  void grow(int e, int n);
  Expr leaf(std::span<const Var> vars, Rng& rng);

  DistributionConfig cfg_;
  double p1_;
  std::vector<std::vector<double>> d_;  // d_[n][e]
};

Expr sample_tree(int n_ops, std::span<const Var> vars, const DistributionConfig& cfg, Rng& rng);

struct DiffSystem {
  std::vector<Expr> equations;
  int n_controls = 0;
  bool has_time = false;
  std::vector<double> x_e;
  std::vector<double> u_e;
  double t_e = 0.0;

  int n_states() const noexcept { return static_cast<int>(equations.size()); }
  /// State, control and (optionally) time variables, in id order.
  std::vector<Var> variables() const;
  /// Evaluation point: x_e, u_e and t_e when the system has time.
  Assignment point() const;
};

/// n random equations over x0..x(n-1), u0..u(q-1) and t if cfg.include_time,
/// each with a uniform operator count in [ops_lo(n+q), ops_hi(n+q)]. The
/// evaluation point is drawn from cfg (one x_e value shared by every state).
DiffSystem sample_system(int n, int q, const DistributionConfig& cfg, TreeSampler& trees, Rng& rng);
DiffSystem sample_system(int n, int q, const DistributionConfig& cfg, Rng& rng);

/// A state variable missing from every equation, or a control missing from
/// every equation.
bool is_degenerate(const DiffSystem& s);

/// Subtracts f(x_e, u_e) from each equation so the evaluation point is an
/// exact equilibrium. Time-dependent equations subtract the time-dependent
/// residual f(x_e, u_e, t), constant-folded. Imaginary parts below 1e-12
/// relative are dropped; any other complex residual raises kComplexValue
/// unless `allow_complex`. Evaluation errors propagate.
DiffSystem make_equilibrium(const DiffSystem& s, bool allow_complex);

using BigInt = boost::multiprecision::cpp_int;

/// Number of expressions with m operators over L leaves, q1 unary and q2
/// binary operators. Throws kNonIntegerRecurrence if a division is inexact.
BigInt problem_space_size(int m, int L, int q1, int q2);
/// All E_0..E_m.
std::vector<BigInt> problem_space_sequence(int m, int L, int q1, int q2);
/// Leaves available to a system with q variables: 20 non-zero integers + q.
inline int leaf_count(int q) noexcept { return 20 + q; }
/// floor(log10(x)) plus the fractional part, for x > 0.
double log10_big(const BigInt& x);

}  // namespace stabgen
