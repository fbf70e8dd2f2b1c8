#include "stabgen/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stabgen/error.hpp"

namespace stabgen {

ExprMatrix jacobian(const std::vector<Expr>& equations, const std::vector<Var>& vars) {
  ExprMatrix j(equations.size(), std::vector<Expr>(vars.size()));
  for (std::size_t r = 0; r < equations.size(); ++r) {
    for (std::size_t c = 0; c < vars.size(); ++c) j[r][c] = differentiate(equations[r], vars[c]);
  }
  return j;
}

ExprMatrix jacobian(const DiffSystem& s) {
  std::vector<Var> states;
  for (int i = 0; i < s.n_states(); ++i) states.push_back(Var::state(i));
  return jacobian(s.equations, states);
}

CMatrix evaluate(const ExprMatrix& m, const Assignment& at) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  CMatrix out(rows, cols);
  Evaluator eval(at);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = eval(m[r][c]);
  }
  return out;
}

CMatrix jacobian_at(const DiffSystem& s) { return evaluate(jacobian(s), s.point()); }

StabilityVerdict classify_matrix(const CMatrix& j) {
  StabilityVerdict v;
  v.eigenvalues = eigenvalues(j);
  double max_re = -std::numeric_limits<double>::infinity();
  for (const Complex& l : v.eigenvalues) max_re = std::max(max_re, l.real());
  v.decay = -max_re;
  v.stable = v.decay > 0.0;
  v.marginal = std::fabs(v.decay) < kMarginalBand;
  return v;
}

StabilityVerdict classify_stability(const DiffSystem& s) {
  if (s.n_controls != 0) throw Error(ErrorKind::kInvalidArgument, "stability systems have no controls");
  return classify_matrix(jacobian_at(s));
}

}  // namespace stabgen
