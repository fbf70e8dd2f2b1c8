#include <algorithm>
#include <cmath>
#include <limits>

#include "stabgen/control.hpp"

#include "stabgen/error.hpp"

namespace stabgen {

Linearization linearize(const DiffSystem& s) {
  if (s.n_controls < 1) throw Error(ErrorKind::kInvalidArgument, "control systems need at least one control");
  std::vector<Var> states, controls;
  for (int i = 0; i < s.n_states(); ++i) states.push_back(Var::state(i));
  for (int i = 0; i < s.n_controls; ++i) controls.push_back(Var::control(i));
  Linearization lin;
  lin.symbolic_A = jacobian(s.equations, states);
  lin.symbolic_B = jacobian(s.equations, controls);
  const Assignment at = s.point();
  lin.A = evaluate(lin.symbolic_A, at).real_view();
  lin.B = evaluate(lin.symbolic_B, at).real_view();
  return lin;
}

Linearization linearization_of(CMatrix a, CMatrix b) {
  if (!a.square() || a.rows() != b.rows()) throw Error(ErrorKind::kInvalidArgument, "A/B shape mismatch");
  Linearization lin;
  lin.A = std::move(a);
  lin.B = std::move(b);
  return lin;
}

CMatrix kalman_matrix(const CMatrix& a, const CMatrix& b) {
  if (!a.square() || a.rows() != b.rows()) throw Error(ErrorKind::kInvalidArgument, "A/B shape mismatch");
  const std::size_t n = a.rows();
  const std::size_t p = b.cols();
  CMatrix c(n, n * p);
  CMatrix block = b;
  for (std::size_t i = 0; i < n; ++i) {
    c.set_block(0, i * p, block);
    if (i + 1 < n) block = a * block;
  }
  return c;
}

namespace {

using Dense = std::vector<std::vector<double>>;

// Diagonal similarity D^-1 A D (powers of two) applied to the pair; leaves the
// controllable dimension unchanged.
void balance_pair(Dense& a, Dense& b) {
  const std::size_t n = a.size();
  for (bool done = false; !done;) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0, r = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::fabs(a[j][i]);
        r += std::fabs(a[i][j]);
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      while (c < r / 2) {
        f *= 2;
        c *= 4;
      }
      while (c > r * 2) {
        f /= 2;
        c /= 4;
      }
      if ((c + r) / f >= 0.95 * s) continue;
      done = false;
      for (std::size_t j = 0; j < n; ++j) a[i][j] /= f;
      for (std::size_t j = 0; j < n; ++j) a[j][i] *= f;
      for (double& v : b[i]) v /= f;
    }
  }
}

// Householder reflector I - 2vv^T/|v|^2 on rows/columns k..n-1.
void reflect_rows(Dense& m, const std::vector<double>& v, double vv, std::size_t k) {
  const std::size_t n = v.size();
  if (m.empty()) return;
  for (std::size_t j = 0; j < m[0].size(); ++j) {
    double s = 0;
    for (std::size_t i = k; i < n; ++i) s += v[i] * m[i][j];
    s *= 2 / vv;
    for (std::size_t i = k; i < n; ++i) m[i][j] -= s * v[i];
  }
}

void reflect_cols(Dense& m, const std::vector<double>& v, double vv, std::size_t k) {
  const std::size_t n = v.size();
  for (auto& row : m) {
    double s = 0;
    for (std::size_t j = k; j < n; ++j) s += row[j] * v[j];
    s *= 2 / vv;
    for (std::size_t j = k; j < n; ++j) row[j] -= s * v[j];
  }
}

}  // namespace

int controllable_dimension(const CMatrix& a, const CMatrix& b, double rel_tol) {
  if (!a.square() || a.rows() != b.rows()) throw Error(ErrorKind::kInvalidArgument, "A/B shape mismatch");
  const CMatrix ra = a.real_view(), rb = b.real_view();
  std::size_t n = ra.rows();
  Dense A(n, std::vector<double>(n)), B(n, std::vector<double>(rb.cols()));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) A[i][j] = ra(i, j).real();
    for (std::size_t j = 0; j < rb.cols(); ++j) B[i][j] = rb(i, j).real();
  }
  balance_pair(A, B);
  double scale = 0;
  for (const auto& row : A) for (double v : row) scale = std::max(scale, std::fabs(v));
  for (const auto& row : B) for (double v : row) scale = std::max(scale, std::fabs(v));
  const double tol = rel_tol * scale;

  int dim = 0;
  while (n > 0) {
    // Column-pivoted QR of B; the reflectors are applied to A as a similarity.
    const std::size_t m = B[0].size();
    std::size_t r = 0;
    std::vector<double> v(n);
    for (; r < std::min(n, m); ++r) {
      std::size_t piv = r;
      double best = -1;
      for (std::size_t j = r; j < m; ++j) {
        double s = 0;
        for (std::size_t i = r; i < n; ++i) s += B[i][j] * B[i][j];
        if (s > best) {
          best = s;
          piv = j;
        }
      }
      const double norm = std::sqrt(best);
      if (!(norm > tol)) break;
      for (auto& row : B) std::swap(row[r], row[piv]);
      std::fill(v.begin(), v.end(), 0.0);
      for (std::size_t i = r; i < n; ++i) v[i] = B[i][r];
      v[r] += B[r][r] >= 0 ? norm : -norm;
      double vv = 0;
      for (std::size_t i = r; i < n; ++i) vv += v[i] * v[i];
      if (vv == 0.0) continue;
      reflect_rows(B, v, vv, r);
      reflect_rows(A, v, vv, r);
      reflect_cols(A, v, vv, r);
    }
    if (r == 0) break;
    dim += static_cast<int>(r);
    const std::size_t rest = n - r;
    Dense a2(rest, std::vector<double>(rest)), b2(rest, std::vector<double>(r));
    for (std::size_t i = 0; i < rest; ++i) {
      for (std::size_t j = 0; j < rest; ++j) a2[i][j] = A[r + i][r + j];
      for (std::size_t j = 0; j < r; ++j) b2[i][j] = A[r + i][j];
    }
    A = std::move(a2);
    B = std::move(b2);
    n = rest;
  }
  return dim;
}

bool degenerate_jacobian(const CMatrix& a, const CMatrix& b) {
  const CMatrix ab = b.empty() ? a : hconcat(a, b);
  for (std::size_t i = 0; i < ab.rows(); ++i) {
    bool zero = true;
    for (std::size_t j = 0; j < ab.cols() && zero; ++j) zero = ab(i, j) == Complex(0, 0);
    if (zero) return true;
  }
  for (std::size_t j = 0; j < ab.cols(); ++j) {
    bool zero = true;
    for (std::size_t i = 0; i < ab.rows() && zero; ++i) zero = ab(i, j) == Complex(0, 0);
    if (zero) return true;
  }
  return false;
}

ControlVerdict controllability(const Linearization& lin, double rel_tol) {
  ControlVerdict v;
  const int n = static_cast<int>(lin.A.rows());
  v.uncontrollable_dim = n - controllable_dimension(lin.A, lin.B, rel_tol);
  v.controllable = v.uncontrollable_dim == 0;
  return v;
}

std::vector<ExprMatrix> nonauto_iterates(const DiffSystem& s) {
  const Linearization sym = [&] {
    std::vector<Var> states, controls;
    for (int i = 0; i < s.n_states(); ++i) states.push_back(Var::state(i));
    for (int i = 0; i < s.n_controls; ++i) controls.push_back(Var::control(i));
    Linearization l;
    l.symbolic_A = jacobian(s.equations, states);
    l.symbolic_B = jacobian(s.equations, controls);
    return l;
  }();
  std::array<std::optional<Expr>, Var::kCount> pin{};
  for (int i = 0; i < s.n_states(); ++i) pin[Var::state(i).id()] = Expr::constant(s.x_e.at(static_cast<std::size_t>(i)));
  for (int i = 0; i < s.n_controls; ++i) pin[Var::control(i).id()] = Expr::constant(s.u_e.at(static_cast<std::size_t>(i)));
  auto pinned = [&](const ExprMatrix& m) {
    ExprMatrix out = m;
    for (auto& row : out) {
      for (auto& e : row) e = constant_fold(substitute(e, pin));
    }
    return out;
  };
  const ExprMatrix a = pinned(sym.symbolic_A);
  const std::size_t n = a.size();
  const std::size_t p = static_cast<std::size_t>(s.n_controls);

  std::vector<ExprMatrix> d;
  d.push_back(pinned(sym.symbolic_B));
  for (std::size_t it = 1; it < 2 * n; ++it) {
    const ExprMatrix& prev = d.back();
    ExprMatrix next(n, std::vector<Expr>(p));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < p; ++c) {
        Expr acc = differentiate(prev[r][c], Var::time());
        for (std::size_t k = 0; k < n; ++k) {
          const Expr& ark = a[r][k];
          const Expr& dkc = prev[k][c];
          if (ark.is_int(0) || dkc.is_int(0)) continue;
          acc = acc - ark * dkc;
        }
        next[r][c] = std::move(acc);
      }
    }
    d.push_back(std::move(next));
  }
  return d;
}

bool nonauto_controllability(const DiffSystem& s, double t_e) {
  const auto d = nonauto_iterates(s);
  Assignment at;
  at.set(Var::time(), t_e);
  Evaluator eval(at);
  const std::size_t n = static_cast<std::size_t>(s.n_states());
  const std::size_t p = static_cast<std::size_t>(s.n_controls);
  CMatrix c(n, d.size() * p);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t k = 0; k < p; ++k) c(r, i * p + k) = eval(d[i][r][k]);
    }
  }
  return rank(c.real_view()) == static_cast<int>(n);
}

Feedback feedback_matrix(const CMatrix& a, const CMatrix& b, double T, bool van_loan) {
  Feedback f;
  f.gramian = van_loan ? gramian_van_loan(a, b, T) : gramian_integral(a, b, T);
  const LU lu(f.gramian);
  f.condition = lu.singular() ? std::numeric_limits<double>::infinity()
                              : f.gramian.norm1() * lu.inverse().norm1();
  if (!(f.condition <= kMaxGramianCondition)) {
    throw Error(ErrorKind::kGramianSingular, "gramian condition number above 1e12");
  }
  // K = -B^T W^{-1}; W symmetric, so K^T = -W^{-1} B.
  f.K = (lu.solve(b) * -1.0).transpose();
  return f;
}

bool verify_feedback(const CMatrix& a, const CMatrix& b, const CMatrix& k) {
  if (k.rows() != b.cols() || k.cols() != a.rows()) throw Error(ErrorKind::kInvalidArgument, "K shape mismatch");
  return spectral_abscissa(a + b * k) < -1e-9;
}

}  // namespace stabgen
