#include <algorithm>
#include <cmath>
#include <functional>

#include "stabgen/linalg.hpp"

namespace stabgen {

// One-sided Jacobi on the columns of a real matrix (tall orientation).
std::vector<double> singular_values(const CMatrix& m) {
  const CMatrix r = m.real_view();
  const bool wide = r.cols() > r.rows();
  const std::size_t rows = wide ? r.cols() : r.rows();
  const std::size_t cols = wide ? r.rows() : r.cols();
  std::vector<double> a(rows * cols);  // column-major
  for (std::size_t i = 0; i < r.rows(); ++i) {
    for (std::size_t j = 0; j < r.cols(); ++j) {
      const double v = r(i, j).real();
      if (wide) a[i * rows + j] = v;
      else a[j * rows + i] = v;
    }
  }
  auto col = [&](std::size_t j) { return a.data() + j * rows; };

  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0, beta = 0, gamma = 0;
        const double* cp = col(p);
        const double* cq = col(q);
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += cp[i] * cp[i];
          beta += cq[i] * cq[i];
          gamma += cp[i] * cq[i];
        }
        if (gamma == 0.0 || std::fabs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        double* wp = col(p);
        double* wq = col(q);
        for (std::size_t i = 0; i < rows; ++i) {
          const double x = wp[i];
          const double y = wq[i];
          wp[i] = c * x - s * y;
          wq[i] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < rows; ++i) s += col(j)[i] * col(j)[i];
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

int rank(const CMatrix& m, double rel_tol) {
  if (m.empty()) return 0;
  const auto sv = singular_values(m);
  if (sv.empty() || sv.front() == 0.0) return 0;
  const double threshold = rel_tol * sv.front() * static_cast<double>(std::max(m.rows(), m.cols()));
  int r = 0;
  for (double s : sv) r += s > threshold;
  return r;
}

}  // namespace stabgen
