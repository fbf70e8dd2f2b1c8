#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "stabgen/error.hpp"
#include "stabgen/linalg.hpp"

namespace stabgen {
namespace {

constexpr int kMaxPanelLog2 = 14;
constexpr double kRelTol = 1e-10;

using Rule = boost::math::quadrature::gauss<double, 10>;

void check_shapes(const CMatrix& a, const CMatrix& b, double T) {
  if (!a.square() || a.rows() != b.rows()) throw Error(ErrorKind::kInvalidArgument, "gramian shape mismatch");
  if (!(T > 0)) throw Error(ErrorKind::kInvalidArgument, "gramian horizon must be positive");
}

CMatrix symmetrize(const CMatrix& w) { return (w + w.transpose()) * 0.5; }

// Sum over `panels` uniform panels of a 10-point Gauss-Legendre rule.
CMatrix panel_sum(const CMatrix& a, const CMatrix& bbt, double T, int panels, int& nodes) {
  const std::size_t n = a.rows();
  CMatrix w(n, n);
  const double h = T / panels;
  const auto& x = Rule::abscissa();
  const auto& wt = Rule::weights();
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t k = 0; k < x.size(); ++k) {
      for (double sign : {-1.0, 1.0}) {
        const double t = mid + sign * 0.5 * h * x[k];
        const CMatrix e = expm(a * (-t));
        w += (e * bbt * e.transpose()) * (0.5 * h * wt[k]);
        ++nodes;
      }
    }
  }
  return w;
}

}  // namespace

CMatrix gramian_integral(const CMatrix& a, const CMatrix& b, double T, GramianStats* stats) {
  check_shapes(a, b, T);
  const CMatrix bbt = b * b.transpose();
  int nodes = 0;
  CMatrix prev = panel_sum(a, bbt, T, 1, nodes);
  for (int level = 1; level <= kMaxPanelLog2; ++level) {
    const int panels = 1 << level;
    CMatrix next = panel_sum(a, bbt, T, panels, nodes);
    const double scale = next.frobenius();
    if ((next - prev).frobenius() <= kRelTol * scale || scale == 0.0) {
      if (stats) *stats = {panels, nodes};
      return symmetrize(next);
    }
    prev = std::move(next);
  }
  throw Error(ErrorKind::kQuadratureStall, "gramian quadrature did not settle within 2^14 panels");
}

CMatrix gramian_factor(const CMatrix& a, const CMatrix& b, double T) {
  GramianStats stats;
  gramian_integral(a, b, T, &stats);
  const std::size_t n = a.rows(), p = b.cols();
  const auto& x = Rule::abscissa();
  const auto& wt = Rule::weights();
  const double h = T / stats.panels;
  CMatrix f(n, p * static_cast<std::size_t>(stats.panels) * 2 * x.size());
  std::size_t col = 0;
  for (int panel = 0; panel < stats.panels; ++panel) {
    const double mid = (panel + 0.5) * h;
    for (std::size_t k = 0; k < x.size(); ++k) {
      for (double sign : {-1.0, 1.0}) {
        const double t = mid + sign * 0.5 * h * x[k];
        f.set_block(0, col, expm(a * (-t)) * b * std::sqrt(0.5 * h * wt[k]));
        col += p;
      }
    }
  }
  return f;
}

// expm([[A, BB^T], [0, -A^T]] T) = [[F11, F12], [0, F22]], W = F22^T F12.
CMatrix gramian_van_loan(const CMatrix& a, const CMatrix& b, double T) {
  check_shapes(a, b, T);
  const std::size_t n = a.rows();
  CMatrix big(2 * n, 2 * n);
  big.set_block(0, 0, a * T);
  big.set_block(0, n, (b * b.transpose()) * T);
  big.set_block(n, n, a.transpose() * (-T));
  const CMatrix f = expm(big);
  return symmetrize(f.block(n, n, n, n).transpose() * f.block(0, n, n, n));
}

}  // namespace stabgen
