#pragma once

#include <optional>

#include "stabgen/linalg.hpp"
#include "stabgen/sampler.hpp"
#include "stabgen/stability.hpp"

namespace stabgen {

struct Linearization {
  CMatrix A;  // n x n, real
  CMatrix B;  // n x p, real
  ExprMatrix symbolic_A;
  ExprMatrix symbolic_B;
};

/// A = df/dx, B = df/du at (x_e, u_e[, t_e]). Throws kComplexValue when either
/// matrix has an imaginary part above 1e-9; evaluation errors propagate.
Linearization linearize(const DiffSystem& s);
/// Numeric-only linearization (symbolic parts left empty).
Linearization linearization_of(CMatrix a, CMatrix b);

/// [B, AB, ..., A^{n-1} B].
CMatrix kalman_matrix(const CMatrix& a, const CMatrix& b);

struct ControlVerdict {
  int uncontrollable_dim = 0;
  bool controllable = false;
  std::optional<CMatrix> K;
};

/// Dimension of the controllable subspace, i.e. rank [B, AB, ..., A^{n-1}B],
/// computed by the orthogonal staircase reduction of the balanced pair. Blocks
/// below rel_tol * max|entry| count as zero.
int controllable_dimension(const CMatrix& a, const CMatrix& b, double rel_tol = kDefaultRankTol);

ControlVerdict controllability(const Linearization& lin, double rel_tol = kDefaultRankTol);

/// Some row of [A B] vanishes (an equation is locally constant) or some column
/// does (a variable has no local effect). `b` may be empty.
bool degenerate_jacobian(const CMatrix& a, const CMatrix& b);

/// Symbolic iterates D_0 = B(t), D_{i+1} = D_i' - A(t) D_i with x and u pinned
/// to (x_e, u_e), i < 2n.
std::vector<ExprMatrix> nonauto_iterates(const DiffSystem& s);
/// rank [D_0(t_e), ..., D_{2n-1}(t_e)] == n. Evaluation errors propagate;
/// complex iterates raise kComplexValue.
bool nonauto_controllability(const DiffSystem& s, double t_e);

inline constexpr double kMaxGramianCondition = 1e12;

struct Feedback {
  CMatrix K;       // p x n
  CMatrix gramian;  // W_T
  double condition = 0.0;
};

/// K = -B^T W_T^{-1}, W_T = int_0^T e^{-At} B B^T e^{-A^T t} dt (quadrature, or
/// the block-exponential path when `van_loan`). Throws kGramianSingular when
/// cond_1(W_T) > 1e12.
Feedback feedback_matrix(const CMatrix& a, const CMatrix& b, double T, bool van_loan = false);
inline Feedback feedback_matrix(const Linearization& lin, double T) { return feedback_matrix(lin.A, lin.B, T); }

/// max Re eig(A + B K) < -1e-9.
bool verify_feedback(const CMatrix& a, const CMatrix& b, const CMatrix& k);
inline bool verify_feedback(const Linearization& lin, const CMatrix& k) { return verify_feedback(lin.A, lin.B, k); }

}  // namespace stabgen
