#include <algorithm>
#include <cmath>

#include "stabgen/error.hpp"
#include "stabgen/pde.hpp"

namespace stabgen {
namespace {

// Base-factor mix per axis: Gaussian, Sinc, Dirac, none.
constexpr double kAxisWeights[4] = {0.3, 0.3, 0.2, 0.2};

double nonzero_int(Rng& rng, int bound) {
  const auto v = rng.uniform_int(1, bound);
  return static_cast<double>(rng.bernoulli(0.5) ? v : -v);
}

}  // namespace

PdeProblem sample_pde(int n, Rng& rng) {
  if (n < 1 || n > 9) throw Error(ErrorKind::kInvalidArgument, "PDE dimension out of range");
  PdeProblem pb;
  pb.op.n = n;
  const auto terms = rng.uniform_int(1, n + 3);
  for (std::int64_t t = 0; t < terms; ++t) {
    MultiIndex alpha(static_cast<std::size_t>(n), 0);
    const auto order = rng.uniform_int(1, kMaxPdeOrder);
    const auto axes = rng.uniform_int(1, std::min<std::int64_t>(n, order));
    // Spread `order` over `axes` distinct random axes, each at least 1.
    std::vector<int> pool(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) pool[static_cast<std::size_t>(j)] = j;
    for (std::int64_t a = 0; a < axes; ++a) {
      const auto pick = rng.uniform_int(a, n - 1);
      std::swap(pool[static_cast<std::size_t>(a)], pool[static_cast<std::size_t>(pick)]);
      alpha[static_cast<std::size_t>(pool[static_cast<std::size_t>(a)])] = 1;
    }
    for (std::int64_t rest = order - axes; rest > 0; --rest) {
      alpha[static_cast<std::size_t>(pool[static_cast<std::size_t>(rng.uniform_int(0, axes - 1))])] += 1;
    }
    pb.op.add(std::move(alpha), nonzero_int(rng, 9));
  }
  // Coefficients of repeated multi-indices may cancel.
  bool any = false;
  for (const auto& entry : pb.op.coeffs) any = any || entry.second != 0.0;
  if (!any) pb.op.coeffs.begin()->second = 1.0;

  pb.u0.axes.resize(static_cast<std::size_t>(n));
  for (auto& axis : pb.u0.axes) {
    axis.kind = static_cast<AxisFactor>(rng.weighted(kAxisWeights));
    axis.a = axis.kind == AxisFactor::kNone ? 1.0 : nonzero_int(rng, 100);
  }
  const auto d = rng.uniform_int(0, 2 * n);
  for (std::int64_t k = 0; k < d; ++k) {
    Modulation m;
    m.axis = static_cast<int>(rng.uniform_int(0, n - 1));
    m.b = nonzero_int(rng, 100);
    pb.u0.modulations.push_back(m);
  }
  return pb;
}

PDEVerdict classify_pde(const DiffOperator& d, const InitialCondition& u0, double scale) {
  d.validate();
  if (static_cast<int>(u0.axes.size()) != d.n) {
    throw Error(ErrorKind::kInvalidArgument, "initial condition dimension mismatch");
  }
  if (!(scale > 0)) throw Error(ErrorKind::kInvalidArgument, "symbol scale must be positive");
  PDEVerdict v;
  v.support = support_of(u0);
  const MinimizeResult m = minimize_real(fourier_polynomial(d, scale).real_part(), v.support);
  v.min_real = m.value;
  v.ambiguous = m.ambiguous;
  v.exists = std::isfinite(m.value);
  v.vanishes = v.exists && m.value > 0.0;
  v.marginal = v.exists && std::fabs(m.value) < kPdeMarginalBand;
  return v;
}

}  // namespace stabgen
