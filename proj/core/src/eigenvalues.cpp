#include <algorithm>
#include <cmath>
#include <limits>

#include "stabgen/error.hpp"
#include "stabgen/linalg.hpp"

namespace stabgen {
namespace {

double abs1(Complex z) { return std::fabs(z.real()) + std::fabs(z.imag()); }

// Parlett-Reinsch balancing with powers of two (exact, eigenvalue-preserving).
void balance(CMatrix& a) {
  const std::size_t n = a.rows();
  constexpr double kRadix = 2.0;
  constexpr double kSqRadix = kRadix * kRadix;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0, c = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs1(a(j, i));
        r += abs1(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / kRadix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= kRadix;
        c *= kSqRadix;
      }
      g = r * kRadix;
      while (c > g) {
        f /= kRadix;
        c /= kSqRadix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        for (std::size_t j = 0; j < n; ++j) a(i, j) /= f;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

void hessenberg(CMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double norm = 0;
    for (std::size_t i = k + 1; i < n; ++i) norm += std::norm(a(i, k));
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const Complex x0 = a(k + 1, k);
    const Complex phase = std::abs(x0) > 0 ? x0 / std::abs(x0) : Complex(1, 0);
    const Complex alpha = -phase * norm;
    std::fill(v.begin(), v.end(), Complex(0, 0));
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] -= alpha;
    double vn = 0;
    for (std::size_t i = k + 1; i < n; ++i) vn += std::norm(v[i]);
    vn = std::sqrt(vn);
    if (vn == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vn;
    // A <- (I - 2vv^H) A
    for (std::size_t j = k; j < n; ++j) {
      Complex s = 0;
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * a(i, j);
      s *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= v[i] * s;
    }
    // A <- A (I - 2vv^H)
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = 0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      s *= 2.0;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * std::conj(v[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

struct Givens {
  double c = 1.0;
  Complex s = 0.0;
};

// G = [[c, s], [-conj(s), c]] with G [x; y] = [r; 0].
Givens make_givens(Complex x, Complex y) {
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  if (ay == 0.0) return {};
  if (ax == 0.0) return {0.0, std::conj(y) / ay};
  const double r = std::hypot(ax, ay);
  return {ax / r, (x / ax) * std::conj(y) / r};
}

Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex half = 0.5 * (a - d);
  const Complex disc = std::sqrt(half * half + b * c);
  const Complex mu1 = 0.5 * (a + d) + disc;
  const Complex mu2 = 0.5 * (a + d) - disc;
  return std::abs(mu1 - d) <= std::abs(mu2 - d) ? mu1 : mu2;
}

}  // namespace

std::vector<Complex> eigenvalues(const CMatrix& m) {
  if (!m.square() || m.rows() == 0) throw Error(ErrorKind::kInvalidArgument, "eigenvalues need a square matrix");
  if (m.rows() > kMaxEigenDim) throw Error(ErrorKind::kInvalidArgument, "matrix dimension above 16");
  if (!m.all_finite()) throw Error(ErrorKind::kNonFinite, "non-finite matrix entry");
  const std::size_t n = m.rows();
  CMatrix h = m;
  balance(h);
  hessenberg(h);

  std::vector<Complex> eig;
  eig.reserve(n);
  const double eps = std::numeric_limits<double>::epsilon();
  const double hnorm = std::max(h.max_abs(), std::numeric_limits<double>::min());
  const std::size_t max_sweeps = 100 * n * n;
  std::size_t sweeps = 0;
  int since_deflation = 0;
  std::vector<Givens> rot(n);

  std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
  while (hi >= 0) {
    if (hi == 0) {
      eig.push_back(h(0, 0));
      break;
    }
    auto H = [&](std::ptrdiff_t i, std::ptrdiff_t j) -> Complex& {
      return h(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    };
    std::ptrdiff_t lo = hi;
    while (lo > 0) {
      double s = abs1(H(lo - 1, lo - 1)) + abs1(H(lo, lo));
      if (s == 0.0) s = hnorm;
      if (abs1(H(lo, lo - 1)) <= eps * s) {
        H(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eig.push_back(H(hi, hi));
      --hi;
      since_deflation = 0;
      continue;
    }
    if (++sweeps > max_sweeps) throw Error(ErrorKind::kNoConvergence, "QR iteration did not converge");

    Complex mu;
    if (since_deflation > 0 && since_deflation % 10 == 0) {
      // Exceptional shift to break cycles.
      const double sub = abs1(H(hi, hi - 1)) + (hi >= 2 ? abs1(H(hi - 1, hi - 2)) : 0.0);
      mu = H(hi, hi) + Complex(0.75 * sub, 0.4375 * sub);
    } else {
      mu = wilkinson_shift(H(hi - 1, hi - 1), H(hi - 1, hi), H(hi, hi - 1), H(hi, hi));
    }
    ++since_deflation;

    for (std::ptrdiff_t k = lo; k <= hi; ++k) H(k, k) -= mu;
    for (std::ptrdiff_t k = lo; k < hi; ++k) {
      const Givens g = make_givens(H(k, k), H(k + 1, k));
      rot[static_cast<std::size_t>(k)] = g;
      for (std::ptrdiff_t j = k; j <= hi; ++j) {
        const Complex t1 = H(k, j);
        const Complex t2 = H(k + 1, j);
        H(k, j) = g.c * t1 + g.s * t2;
        H(k + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
      }
      H(k + 1, k) = 0.0;
    }
    for (std::ptrdiff_t k = lo; k < hi; ++k) {
      const Givens g = rot[static_cast<std::size_t>(k)];
      for (std::ptrdiff_t i = lo; i <= std::min(k + 1, hi); ++i) {
        const Complex t1 = H(i, k);
        const Complex t2 = H(i, k + 1);
        H(i, k) = t1 * g.c + t2 * std::conj(g.s);
        H(i, k + 1) = -t1 * g.s + t2 * g.c;
      }
    }
    for (std::ptrdiff_t k = lo; k <= hi; ++k) H(k, k) += mu;
  }
  return eig;
}

double spectral_abscissa(const CMatrix& m) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Complex& l : eigenvalues(m)) best = std::max(best, l.real());
  return best;
}

double min_eigenvalue_symmetric(const CMatrix& m) {
  CMatrix sym = m;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) sym(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  }
  double best = std::numeric_limits<double>::infinity();
  for (const Complex& l : eigenvalues(sym)) best = std::min(best, l.real());
  return best;
}

}  // namespace stabgen
