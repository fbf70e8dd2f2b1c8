#include <numeric>

#include "stabgen/error.hpp"
#include "stabgen/pde.hpp"

namespace stabgen {
namespace {

double monomial(const MultiIndex& alpha, const std::vector<double>& xi) {
  double v = 1.0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    for (int k = 0; k < alpha[j]; ++k) v *= xi[j];
  }
  return v;
}

Complex i_pow(int k) {
  switch (k % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

}  // namespace

void DiffOperator::add(MultiIndex alpha, double a) {
  if (static_cast<int>(alpha.size()) != n) throw Error(ErrorKind::kInvalidArgument, "multi-index length mismatch");
  auto it = coeffs.try_emplace(std::move(alpha), 0.0).first;
  it->second += a;
  if (it->second == 0.0) coeffs.erase(it);
}

void DiffOperator::validate() const {
  if (n < 1 || n > 9) throw Error(ErrorKind::kInvalidArgument, "operator dimension out of range");
  bool nonzero = false;
  for (const auto& [alpha, a] : coeffs) {
    if (static_cast<int>(alpha.size()) != n) throw Error(ErrorKind::kInvalidArgument, "multi-index length mismatch");
    int order = 0;
    for (int k : alpha) {
      if (k < 0) throw Error(ErrorKind::kInvalidArgument, "negative derivative order");
      order += k;
    }
    if (order > kMaxPdeOrder) throw Error(ErrorKind::kInvalidArgument, "derivative order above 8");
    nonzero = nonzero || a != 0.0;
  }
  if (!nonzero) throw Error(ErrorKind::kInvalidArgument, "operator has no nonzero coefficient");
}

double RealPoly::operator()(const std::vector<double>& xi) const {
  double s = 0;
  for (const auto& [c, alpha] : terms) s += c * monomial(alpha, xi);
  return s;
}

int RealPoly::degree() const {
  int d = 0;
  for (const auto& term : terms) d = std::max(d, std::accumulate(term.second.begin(), term.second.end(), 0));
  return d;
}

Complex FourierPolynomial::operator()(const std::vector<double>& xi) const {
  Complex s = 0;
  for (const auto& [c, alpha] : terms) s += c * monomial(alpha, xi);
  return s;
}

RealPoly FourierPolynomial::real_part() const {
  RealPoly re;
  re.n = n;
  for (const auto& [c, alpha] : terms) {
    if (c.real() != 0.0) re.terms.emplace_back(c.real(), alpha);
  }
  return re;
}

FourierPolynomial fourier_polynomial(const DiffOperator& d, double scale) {
  FourierPolynomial f;
  f.n = d.n;
  for (const auto& [alpha, a] : d.coeffs) {
    if (a == 0.0) continue;
    const int order = std::accumulate(alpha.begin(), alpha.end(), 0);
    f.terms.emplace_back(scale * a * i_pow(order), alpha);
  }
  return f;
}

}  // namespace stabgen
