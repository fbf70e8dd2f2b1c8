#pragma once

#include <vector>

#include "stabgen/expr.hpp"
#include "stabgen/linalg.hpp"
#include "stabgen/sampler.hpp"

namespace stabgen {

using ExprMatrix = std::vector<std::vector<Expr>>;

/// Entry (i, j) = d equation_i / d vars_j.
ExprMatrix jacobian(const std::vector<Expr>& equations, const std::vector<Var>& vars);
/// Derivatives with respect to the state variables.
ExprMatrix jacobian(const DiffSystem& s);
/// Evaluates every entry at one point, sharing work across entries.
CMatrix evaluate(const ExprMatrix& m, const Assignment& at);
CMatrix jacobian_at(const DiffSystem& s);

inline constexpr double kMarginalBand = 1e-6;

struct StabilityVerdict {
  double decay = 0.0;  // -max Re eigenvalue
  bool stable = false;
  bool marginal = false;  // |decay| < 1e-6; excluded from datasets
  std::vector<Complex> eigenvalues;
};

StabilityVerdict classify_matrix(const CMatrix& j);
/// Throws on evaluation or eigensolver failure.
StabilityVerdict classify_stability(const DiffSystem& s);

}  // namespace stabgen
