#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "stabgen/linalg.hpp"
#include "stabgen/rng.hpp"

namespace stabgen {

using MultiIndex = std::vector<int>;

inline constexpr int kMaxPdeOrder = 8;

/// Sum over alpha of a_alpha d^alpha / dx^alpha in n space dimensions.
struct DiffOperator {
  int n = 0;
  std::map<MultiIndex, double> coeffs;

  void add(MultiIndex alpha, double a);
  /// Throws kInvalidArgument on a bad dimension, order or all-zero operator.
  void validate() const;
};

/// Real polynomial in n variables.
struct RealPoly {
  int n = 0;
  std::vector<std::pair<double, MultiIndex>> terms;

  double operator()(const std::vector<double>& xi) const;
  int degree() const;
};

/// Complex polynomial f(xi) = scale * sum a_alpha (i xi)^alpha.
struct FourierPolynomial {
  int n = 0;
  std::vector<std::pair<Complex, MultiIndex>> terms;

  Complex operator()(const std::vector<double>& xi) const;
  RealPoly real_part() const;
};

/// The worked examples this library must reproduce use 2*pi * sum a (i xi)^a;
/// pass scale = 1 for the bare symbol. A positive scale never changes a verdict.
inline constexpr double kFourierScale = 2.0 * std::numbers::pi;
FourierPolynomial fourier_polynomial(const DiffOperator& d, double scale = kFourierScale);

enum class AxisFactor { kGaussian, kSinc, kDirac, kNone };

struct AxisBase {
  AxisFactor kind = AxisFactor::kNone;
  double a = 1.0;  // unused for kNone
};

struct Modulation {
  int axis = 0;
  double b = 0.0;
};

/// prod_j base_j(a_j x_j) * prod_k exp(i b_k x_{axis_k}). Gaussian(a) is
/// exp(-(a x)^2), Sinc(a) is sin(a x)/(a x), Dirac(a) is delta_0(a x) and None
/// is the constant 1.
struct InitialCondition {
  std::vector<AxisBase> axes;
  std::vector<Modulation> modulations;
};

struct AxisSupport {
  enum class Kind { kPoint, kInterval, kFull } kind = Kind::kFull;
  double lo = 0.0;
  double hi = 0.0;  // lo == hi for points

  static AxisSupport point(double c) { return {Kind::kPoint, c, c}; }
  static AxisSupport interval(double lo, double hi) { return {Kind::kInterval, lo, hi}; }
  static AxisSupport full() { return {}; }
  friend bool operator==(const AxisSupport&, const AxisSupport&) = default;
};

using SupportSet = std::vector<AxisSupport>;

/// Frequency support of the Fourier transform (ordinary-frequency convention,
/// modulation exp(i b x) shifts by b / (2 pi)).
SupportSet support_of(const InitialCondition& u0);

struct MinimizeResult {
  double value = 0.0;  // -inf when unbounded below
  bool ambiguous = false;  // the two unboundedness detectors disagreed
  std::vector<double> argmin;
};

/// Infimum of Re f over the support set.
MinimizeResult minimize_real(const RealPoly& re, const SupportSet& support);
double min_real_on_support(const FourierPolynomial& f, const SupportSet& support);

inline constexpr double kPdeMarginalBand = 1e-9;

struct PDEVerdict {
  bool exists = false;
  bool vanishes = false;
  bool marginal = false;
  bool ambiguous = false;
  SupportSet support;
  double min_real = 0.0;
};

PDEVerdict classify_pde(const DiffOperator& d, const InitialCondition& u0, double scale = kFourierScale);

struct PdeProblem {
  DiffOperator op;
  InitialCondition u0;
};

/// Random operator and initial condition in n dimensions.
PdeProblem sample_pde(int n, Rng& rng);

}  // namespace stabgen
