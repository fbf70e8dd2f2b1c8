#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "stabgen/error.hpp"
#include "stabgen/pde.hpp"

namespace stabgen {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kGridCap = 65;
constexpr double kGridBudget = 2.75e5;
constexpr double kFullAxisHalfWidth = 4.0;
constexpr int kStarts = 8;
constexpr std::uint64_t kProbeSeed = 0x5eed5eedULL;

using Poly1 = std::vector<double>;  // coefficients, lowest degree first

void trim(Poly1& p) {
  double scale = 0;
  for (double c : p) scale = std::max(scale, std::fabs(c));
  while (!p.empty() && std::fabs(p.back()) <= 1e-12 * scale) p.pop_back();
}

double horner(const Poly1& p, double t) {
  double v = 0;
  for (std::size_t i = p.size(); i-- > 0;) v = v * t + p[i];
  return v;
}

Poly1 derivative(const Poly1& p) {
  Poly1 d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(static_cast<double>(i) * p[i]);
  return d;
}

Poly1 multiply(const Poly1& a, const Poly1& b) {
  Poly1 c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

// Real roots via the companion matrix, Newton-polished.
std::vector<double> real_roots(Poly1 p) {
  trim(p);
  std::vector<double> roots;
  if (p.size() < 2) return roots;
  const std::size_t m = p.size() - 1;
  if (m == 1) {
    roots.push_back(-p[0] / p[1]);
    return roots;
  }
  CMatrix c(m, m);
  for (std::size_t i = 1; i < m; ++i) c(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < m; ++i) c(i, m - 1) = -p[i] / p[m];
  const Poly1 dp = derivative(p);
  for (const Complex& z : eigenvalues(c)) {
    if (std::fabs(z.imag()) > 1e-6 * (1.0 + std::abs(z))) continue;
    double t = z.real();
    for (int it = 0; it < 8; ++it) {
      const double f = horner(p, t);
      const double g = horner(dp, t);
      if (g == 0.0) break;
      const double step = f / g;
      t -= step;
      if (std::fabs(step) <= 1e-15 * (1.0 + std::fabs(t))) break;
    }
    roots.push_back(t);
  }
  return roots;
}

// Minimiser of p on [lo, hi] (either end may be infinite). Returns `start`
// when nothing better is found.
double minimize_1d(const Poly1& p, double lo, double hi, double start) {
  double best_t = start;
  double best = horner(p, start);
  auto consider = [&](double t) {
    if (!(t >= lo && t <= hi) || !std::isfinite(t)) return;
    const double v = horner(p, t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  };
  if (std::isfinite(lo)) consider(lo);
  if (std::isfinite(hi)) consider(hi);
  for (double r : real_roots(derivative(p))) consider(std::clamp(r, std::max(lo, -1e6), std::min(hi, 1e6)));
  return best_t;
}

struct Reduced {
  int k = 0;  // free variables
  std::vector<std::pair<double, MultiIndex>> terms;
  double constant = 0.0;

  double operator()(const std::vector<double>& x) const {
    double s = constant;
    for (const auto& [c, alpha] : terms) {
      double v = c;
      for (int j = 0; j < k; ++j) {
        for (int e = 0; e < alpha[static_cast<std::size_t>(j)]; ++e) v *= x[static_cast<std::size_t>(j)];
      }
      s += v;
    }
    return s;
  }

  // p(x with x_j = t) as a polynomial in t.
  Poly1 along_axis(const std::vector<double>& x, int j) const {
    Poly1 q(kMaxPdeOrder + 1, 0.0);
    q[0] = constant;
    for (const auto& [c, alpha] : terms) {
      double v = c;
      for (int i = 0; i < k; ++i) {
        if (i == j) continue;
        for (int e = 0; e < alpha[static_cast<std::size_t>(i)]; ++e) v *= x[static_cast<std::size_t>(i)];
      }
      q[static_cast<std::size_t>(alpha[static_cast<std::size_t>(j)])] += v;
    }
    return q;
  }

  // p(y + s d) as a polynomial in s.
  Poly1 along_ray(const std::vector<double>& y, const std::vector<double>& d) const {
    Poly1 q(1, constant);
    for (const auto& [c, alpha] : terms) {
      Poly1 t(1, c);
      for (int i = 0; i < k; ++i) {
        const Poly1 lin = {y[static_cast<std::size_t>(i)], d[static_cast<std::size_t>(i)]};
        for (int e = 0; e < alpha[static_cast<std::size_t>(i)]; ++e) t = multiply(t, lin);
      }
      if (t.size() > q.size()) q.resize(t.size(), 0.0);
      for (std::size_t i = 0; i < t.size(); ++i) q[i] += t[i];
    }
    return q;
  }
};

Reduced reduce(const RealPoly& re, const SupportSet& support, std::vector<int>& free_axes) {
  free_axes.clear();
  for (int j = 0; j < re.n; ++j) {
    if (support[static_cast<std::size_t>(j)].kind != AxisSupport::Kind::kPoint) free_axes.push_back(j);
  }
  Reduced r;
  r.k = static_cast<int>(free_axes.size());
  std::map<MultiIndex, double> merged;
  for (const auto& [c, alpha] : re.terms) {
    double v = c;
    MultiIndex sub;
    for (int j = 0; j < re.n; ++j) {
      const AxisSupport& s = support[static_cast<std::size_t>(j)];
      const int e = alpha[static_cast<std::size_t>(j)];
      if (s.kind == AxisSupport::Kind::kPoint) {
        for (int i = 0; i < e; ++i) v *= s.lo;
      } else {
        sub.push_back(e);
      }
    }
    merged[sub] += v;
  }
  for (auto& [alpha, c] : merged) {
    bool constant = true;
    for (int e : alpha) constant = constant && e == 0;
    if (constant) r.constant += c;
    else if (c != 0.0) r.terms.emplace_back(c, alpha);
  }
  return r;
}

bool rays_unbounded(const Reduced& p, const std::vector<int>& unbounded, const std::vector<double>& lo,
                    const std::vector<double>& hi) {
  const std::size_t k = static_cast<std::size_t>(p.k);
  // Base points: box centre and corners of the bounded axes.
  std::vector<std::size_t> bounded;
  for (std::size_t j = 0; j < k; ++j) {
    if (std::isfinite(lo[j])) bounded.push_back(j);
  }
  std::vector<std::vector<double>> bases;
  std::vector<double> centre(k, 0.0);
  for (std::size_t j : bounded) centre[j] = 0.5 * (lo[j] + hi[j]);
  bases.push_back(centre);
  const std::size_t corners = bounded.size() <= 6 ? (std::size_t{1} << bounded.size()) : 64;
  for (std::size_t mask = 0; mask < corners; ++mask) {
    std::vector<double> y = centre;
    for (std::size_t b = 0; b < bounded.size() && b < 6; ++b) {
      const std::size_t j = bounded[b];
      y[j] = (mask >> b) & 1 ? hi[j] : lo[j];
    }
    bases.push_back(std::move(y));
  }

  const std::size_t u = unbounded.size();
  std::size_t families = 1;
  for (std::size_t i = 0; i < u; ++i) families *= 3;
  std::vector<double> d(k, 0.0);
  for (std::size_t code = 1; code < families; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < u; ++i) {
      d[static_cast<std::size_t>(unbounded[i])] = static_cast<double>(static_cast<int>(c % 3) - 1);
      c /= 3;
    }
    for (const auto& y : bases) {
      Poly1 g = p.along_ray(y, d);
      trim(g);
      if (g.size() >= 2 && g.back() < 0.0) return true;
    }
  }
  return false;
}

bool sampling_unbounded(const Reduced& p, const std::vector<int>& unbounded, const std::vector<double>& lo,
                        const std::vector<double>& hi) {
  const std::size_t k = static_cast<std::size_t>(p.k);
  const std::size_t u = unbounded.size();
  const std::size_t count = (std::size_t{1} << u) * u * u;
  Rng rng(kProbeSeed);
  std::vector<double> x(k);
  for (std::size_t s = 0; s < count; ++s) {
    std::vector<double> dir(u);
    double norm = 0;
    for (double& v : dir) {
      v = rng.normal();
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (std::size_t j = 0; j < k; ++j) x[j] = std::isfinite(lo[j]) ? rng.uniform(lo[j], hi[j]) : 0.0;
    auto at_radius = [&](double r) {
      for (std::size_t i = 0; i < u; ++i) x[static_cast<std::size_t>(unbounded[i])] = r * dir[i] / norm;
      return p(x);
    };
    const double f1 = at_radius(1e3);
    const double f2 = at_radius(1e6);
    if (f2 < 100.0 * std::min(f1, 0.0) - 1e3) return true;
  }
  return false;
}

}  // namespace

MinimizeResult minimize_real(const RealPoly& re, const SupportSet& support) {
  if (static_cast<int>(support.size()) != re.n) throw Error(ErrorKind::kInvalidArgument, "support dimension mismatch");
  std::vector<int> free_axes;
  const Reduced p = reduce(re, support, free_axes);
  const std::size_t k = free_axes.size();

  MinimizeResult result;
  auto lift = [&](const std::vector<double>& x) {
    std::vector<double> full(static_cast<std::size_t>(re.n));
    for (std::size_t j = 0; j < full.size(); ++j) full[j] = support[j].lo;
    for (std::size_t i = 0; i < k; ++i) full[static_cast<std::size_t>(free_axes[i])] = x[i];
    return full;
  };
  if (p.terms.empty()) {
    result.value = p.constant;
    result.argmin = lift(std::vector<double>(k, 0.0));
    return result;
  }

  std::vector<double> lo(k), hi(k);
  std::vector<int> unbounded;
  for (std::size_t i = 0; i < k; ++i) {
    const AxisSupport& s = support[static_cast<std::size_t>(free_axes[i])];
    if (s.kind == AxisSupport::Kind::kFull) {
      lo[i] = -kInf;
      hi[i] = kInf;
      unbounded.push_back(static_cast<int>(i));
    } else {
      lo[i] = s.lo;
      hi[i] = s.hi;
    }
  }

  if (!unbounded.empty()) {
    const bool by_rays = rays_unbounded(p, unbounded, lo, hi);
    const bool by_sampling = sampling_unbounded(p, unbounded, lo, hi);
    result.ambiguous = by_rays != by_sampling;
    if (by_rays || by_sampling) {
      result.value = -kInf;
      return result;
    }
  }

  // Dense grid over the box (unbounded axes on [-4, 4]), then exact
  // coordinate descent from the best grid points.
  const int per_axis = std::max(2, std::min(kGridCap, static_cast<int>(std::floor(
                                                           std::pow(kGridBudget, 1.0 / static_cast<double>(k)) + 1e-9))));
  std::vector<double> glo(k), ghi(k);
  for (std::size_t i = 0; i < k; ++i) {
    glo[i] = std::isfinite(lo[i]) ? lo[i] : -kFullAxisHalfWidth;
    ghi[i] = std::isfinite(hi[i]) ? hi[i] : kFullAxisHalfWidth;
  }
  std::vector<std::pair<double, std::vector<double>>> best;
  std::vector<int> idx(k, 0);
  std::vector<double> x(k);
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) {
      x[i] = glo[i] + (ghi[i] - glo[i]) * idx[i] / (per_axis - 1);
    }
    const double v = p(x);
    if (best.size() < static_cast<std::size_t>(kStarts) || v < best.back().first) {
      best.emplace_back(v, x);
      std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      if (best.size() > static_cast<std::size_t>(kStarts)) best.pop_back();
    }
    std::size_t i = 0;
    while (i < k && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == k) break;
  }

  result.value = kInf;
  for (auto& [v0, start] : best) {
    std::vector<double> y = start;
    double fy = v0;
    for (int sweep = 0; sweep < 200; ++sweep) {
      const double before = fy;
      for (std::size_t j = 0; j < k; ++j) {
        y[j] = minimize_1d(p.along_axis(y, static_cast<int>(j)), lo[j], hi[j], y[j]);
      }
      fy = p(y);
      if (before - fy <= 1e-14 * (1.0 + std::fabs(fy))) break;
    }
    if (fy < result.value) {
      result.value = fy;
      result.argmin = lift(y);
    }
  }
  return result;
}

double min_real_on_support(const FourierPolynomial& f, const SupportSet& support) {
  return minimize_real(f.real_part(), support).value;
}

}  // namespace stabgen
