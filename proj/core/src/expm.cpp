#include <cmath>

#include "stabgen/error.hpp"
#include "stabgen/linalg.hpp"

namespace stabgen {
namespace {

// Pade(13) coefficients and the 1-norm bound from Higham (2005).
constexpr double kB[14] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                           1187353796428800.0,  129060195264000.0,   10559470521600.0,
                           670442572800.0,      33522128640.0,       1323241920.0,
                           40840800.0,          960960.0,            16380.0,
                           182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

CMatrix axpy3(double a, const CMatrix& x, double b, const CMatrix& y, double c, const CMatrix& z) {
  CMatrix out = x * a;
  out += y * b;
  out += z * c;
  return out;
}

}  // namespace

CMatrix expm(const CMatrix& m) {
  if (!m.square()) throw Error(ErrorKind::kInvalidArgument, "expm of non-square matrix");
  if (!m.all_finite()) throw Error(ErrorKind::kNonFinite, "non-finite matrix entry");
  const std::size_t n = m.rows();
  const double norm = m.norm1();
  if (norm > 700.0) throw Error(ErrorKind::kOverflow, "expm argument norm above 700");
  if (norm == 0.0) return CMatrix::identity(n);

  int s = 0;
  if (norm > kTheta13) s = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  const CMatrix a = s > 0 ? m * std::ldexp(1.0, -s) : m;
  const CMatrix id = CMatrix::identity(n);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;

  CMatrix u_inner = a6 * axpy3(kB[13], a6, kB[11], a4, kB[9], a2);
  u_inner += axpy3(kB[7], a6, kB[5], a4, kB[3], a2);
  u_inner += id * kB[1];
  const CMatrix u = a * u_inner;

  CMatrix v = a6 * axpy3(kB[12], a6, kB[10], a4, kB[8], a2);
  v += axpy3(kB[6], a6, kB[4], a4, kB[2], a2);
  v += id * kB[0];

  CMatrix r = LU(v - u).solve(v + u);
  for (int i = 0; i < s; ++i) r = r * r;
  return r;
}

}  // namespace stabgen
