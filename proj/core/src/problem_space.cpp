#include <cmath>

#include "stabgen/error.hpp"
#include "stabgen/sampler.hpp"

namespace stabgen {

// (m+1) E_m = (q1 + 2 q2 L)(2m - 1) E_{m-1} - q1^2 (m - 2) E_{m-2}
std::vector<BigInt> problem_space_sequence(int m, int L, int q1, int q2) {
  if (m < 0 || L < 1 || q1 < 0 || q2 < 0) throw Error(ErrorKind::kInvalidArgument, "invalid problem-space parameters");
  std::vector<BigInt> e;
  e.reserve(static_cast<std::size_t>(m) + 1);
  e.emplace_back(L);
  if (m >= 1) e.emplace_back(BigInt(q1 + q2 * L) * L);
  const BigInt a = BigInt(q1) + 2 * BigInt(q2) * L;
  const BigInt q1sq = BigInt(q1) * q1;
  for (int k = 2; k <= m; ++k) {
    const BigInt num = a * (2 * k - 1) * e[static_cast<std::size_t>(k - 1)] -
                       q1sq * (k - 2) * e[static_cast<std::size_t>(k - 2)];
    BigInt quot, rem;
    boost::multiprecision::divide_qr(num, BigInt(k + 1), quot, rem);
    if (rem != 0) {
      throw Error(ErrorKind::kNonIntegerRecurrence, "inexact division at m=" + std::to_string(k));
    }
    e.push_back(std::move(quot));
  }
  return e;
}

BigInt problem_space_size(int m, int L, int q1, int q2) {
  return std::move(problem_space_sequence(m, L, q1, q2).back());
}

double log10_big(const BigInt& x) {
  if (x <= 0) throw Error(ErrorKind::kInvalidArgument, "log10 of non-positive value");
  const std::string digits = x.str();
  const std::size_t keep = std::min<std::size_t>(17, digits.size());
  const double lead = std::stod(digits.substr(0, keep));
  return std::log10(lead) + static_cast<double>(digits.size() - keep);
}

}  // namespace stabgen
