#include <cmath>
#include <cstdio>
#include <limits>

#include "stabgen/error.hpp"
#include "stabgen/linalg.hpp"

namespace stabgen {
namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::kInvalidArgument, "matrix shape mismatch");
  }
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::initializer_list<double> values)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  if (values.size() != rows * cols) throw Error(ErrorKind::kInvalidArgument, "initializer size mismatch");
  std::size_t i = 0;
  for (double v : values) data_[i++] = v;
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double CMatrix::re(std::size_t i, std::size_t j) const {
  const Complex v = (*this)(i, j);
  if (std::fabs(v.imag()) > 1e-9) throw Error(ErrorKind::kComplexValue, "complex entry in real view");
  return v.real();
}

double CMatrix::max_abs_imag() const noexcept {
  double m = 0;
  for (const auto& v : data_) m = std::max(m, std::fabs(v.imag()));
  return m;
}

bool CMatrix::all_finite() const noexcept {
  for (const auto& v : data_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

CMatrix CMatrix::real_view(double tol) const {
  if (max_abs_imag() > tol) throw Error(ErrorKind::kComplexValue, "matrix is not real-viewable");
  CMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i].real();
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

CMatrix CMatrix::adjoint() const {
  CMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
  }
  return t;
}

double CMatrix::norm1() const noexcept {
  double best = 0;
  for (std::size_t j = 0; j < cols_; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

double CMatrix::frobenius() const noexcept {
  double s = 0;
  for (const auto& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

double CMatrix::max_abs() const noexcept {
  double m = 0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

Complex CMatrix::trace() const {
  Complex s = 0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
  return s;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const {
  if (r0 + rows > rows_ || c0 + cols > cols_) throw Error(ErrorKind::kInvalidArgument, "block out of range");
  CMatrix b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  }
  return b;
}

void CMatrix::set_block(std::size_t r0, std::size_t c0, const CMatrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw Error(ErrorKind::kInvalidArgument, "block out of range");
  for (std::size_t i = 0; i < b.rows_; ++i) {
    for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }
}

CMatrix& CMatrix::operator+=(const CMatrix& b) {
  require_same_shape(*this, b);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += b.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& b) {
  require_same_shape(*this, b);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= b.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& v : data_) v *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorKind::kInvalidArgument, "matrix product shape mismatch");
  CMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0, 0)) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

CMatrix hconcat(const CMatrix& a, const CMatrix& b) {
  if (a.empty()) return b;
  if (a.rows() != b.rows()) throw Error(ErrorKind::kInvalidArgument, "hconcat row mismatch");
  CMatrix c(a.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(0, a.cols(), b);
  return c;
}

std::string to_string(const CMatrix& m, int precision) {
  std::string s = "[";
  char buf[96];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += i ? ", [" : "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Complex v = m(i, j);
      if (v.imag() == 0.0) {
        std::snprintf(buf, sizeof buf, "%s%.*g", j ? ", " : "", precision, v.real());
      } else {
        std::snprintf(buf, sizeof buf, "%s%.*g%+.*gi", j ? ", " : "", precision, v.real(), precision, v.imag());
      }
      s += buf;
    }
    s += "]";
  }
  return s + "]";
}

// ---------------------------------------------------------------------------
// LU

LU::LU(const CMatrix& a) : lu_(a), perm_(a.rows()) {
  if (!a.square()) throw Error(ErrorKind::kInvalidArgument, "LU of non-square matrix");
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
  const double scale = std::max(a.max_abs(), std::numeric_limits<double>::min());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        p = i;
      }
    }
    if (best <= scale * 1e-300 || best == 0.0) {
      singular_ = true;
      continue;
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
      std::swap(perm_[k], perm_[p]);
      sign_ = -sign_;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = lu_(i, k) / lu_(k, k);
      lu_(i, k) = f;
      if (f == Complex(0, 0)) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
}

CMatrix LU::solve(const CMatrix& b) const {
  if (singular_) throw Error(ErrorKind::kGramianSingular, "singular matrix");
  const std::size_t n = lu_.rows();
  if (b.rows() != n) throw Error(ErrorKind::kInvalidArgument, "LU solve shape mismatch");
  CMatrix x(n, b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = b(perm_[i], c);
      for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x(j, c);
      x(i, c) = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      Complex s = x(i, c);
      for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x(j, c);
      x(i, c) = s / lu_(i, i);
    }
  }
  return x;
}

CMatrix LU::inverse() const { return solve(CMatrix::identity(lu_.rows())); }

Complex LU::determinant() const {
  if (singular_) return 0.0;
  Complex d = static_cast<double>(sign_);
  for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
  return d;
}

double cond1(const CMatrix& a) {
  const LU lu(a);
  if (lu.singular()) return std::numeric_limits<double>::infinity();
  return a.norm1() * lu.inverse().norm1();
}

}  // namespace stabgen
