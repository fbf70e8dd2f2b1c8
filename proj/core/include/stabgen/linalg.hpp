#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace stabgen {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Sizes in this library stay small (n <= 16
/// for square work, Kalman matrices up to 9 x 27), so kernels are plain O(n^3).
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  /// Real entries, row-major.
  CMatrix(std::size_t rows, std::size_t cols, std::initializer_list<double> values);

  static CMatrix identity(std::size_t n);
  static CMatrix zero(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  /// Real part of an entry; throws kComplexValue if |Im| > 1e-9.
  double re(std::size_t i, std::size_t j) const;

  const std::vector<Complex>& data() const noexcept { return data_; }

  double max_abs_imag() const noexcept;
  bool is_real(double tol = 1e-9) const noexcept { return max_abs_imag() <= tol; }
  bool all_finite() const noexcept;
  /// Copy with imaginary parts dropped; throws kComplexValue if not real-viewable.
  CMatrix real_view(double tol = 1e-9) const;

  CMatrix transpose() const;
  CMatrix adjoint() const;
  double norm1() const noexcept;
  double frobenius() const noexcept;
  double max_abs() const noexcept;
  Complex trace() const;

  CMatrix block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const;
  void set_block(std::size_t r0, std::size_t c0, const CMatrix& b);

  CMatrix& operator+=(const CMatrix& b);
  CMatrix& operator-=(const CMatrix& b);
  CMatrix& operator*=(Complex s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend bool operator==(const CMatrix& a, const CMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// [A | B] side by side.
CMatrix hconcat(const CMatrix& a, const CMatrix& b);
std::string to_string(const CMatrix& m, int precision = 6);

inline constexpr std::size_t kMaxEigenDim = 16;

/// Eigenvalues with multiplicity: balancing, Householder Hessenberg reduction,
/// then single-shift complex QR with Wilkinson shifts. Unordered. Throws
/// kNoConvergence after 100 n^2 sweeps.
std::vector<Complex> eigenvalues(const CMatrix& m);
/// max Re over eigenvalues.
double spectral_abscissa(const CMatrix& m);

/// Singular values (descending) by one-sided Jacobi; requires a real-viewable matrix.
std::vector<double> singular_values(const CMatrix& m);
inline constexpr double kDefaultRankTol = 1e-10;
/// Count of singular values above rel_tol * sigma_max * max(rows, cols).
int rank(const CMatrix& m, double rel_tol = kDefaultRankTol);

/// Matrix exponential, Pade-13 scaling and squaring. Throws kOverflow when the
/// 1-norm exceeds 700.
CMatrix expm(const CMatrix& m);

/// Partial-pivot LU factorisation of a square matrix.
class LU {
 public:
  explicit LU(const CMatrix& a);
  bool singular() const noexcept { return singular_; }
  CMatrix solve(const CMatrix& b) const;
  CMatrix inverse() const;
  Complex determinant() const;

 private:
  CMatrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  bool singular_ = false;
};

/// 1-norm condition number; infinity when singular.
double cond1(const CMatrix& a);

struct GramianStats {
  int panels = 0;
  int nodes = 0;
};

/// W = int_0^T e^{-At} B B^T e^{-A^T t} dt by Gauss-Legendre quadrature over
/// uniform panels, doubling the panel count until two successive estimates
/// agree to 1e-10 relative (Frobenius). Symmetrised. Throws kQuadratureStall
/// beyond 2^14 panels.
CMatrix gramian_integral(const CMatrix& a, const CMatrix& b, double T, GramianStats* stats = nullptr);

/// F with W = F F^T on the quadrature nodes gramian_integral settles on.
/// rank(F) decides positive-definiteness of W at the resolution of its
/// square root, which W itself cannot offer for long input chains.
CMatrix gramian_factor(const CMatrix& a, const CMatrix& b, double T);

/// Same integral from one block exponential (Van Loan).
CMatrix gramian_van_loan(const CMatrix& a, const CMatrix& b, double T);

/// Smallest eigenvalue of a Hermitian matrix (real part of the spectrum).
double min_eigenvalue_symmetric(const CMatrix& m);

}  // namespace stabgen
