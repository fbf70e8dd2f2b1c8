#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stabgen/error.hpp"
#include "stabgen/pde.hpp"

using namespace stabgen;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

DiffOperator a2_operator() {
  DiffOperator d;
  d.n = 3;
  d.add({2, 0, 0}, 2.0);
  d.add({0, 2, 0}, 0.5);
  d.add({0, 0, 4}, 1.0);
  d.add({1, 1, 0}, -7.0);
  d.add({0, 1, 2}, -1.5);
  return d;
}

// e^{-3i x2} sin(x0)/x0 e^{2.5i x1} e^{-x2^2}
InitialCondition a2_initial() {
  InitialCondition u;
  u.axes = {{AxisFactor::kSinc, 1.0}, {AxisFactor::kNone, 1.0}, {AxisFactor::kGaussian, 1.0}};
  u.modulations = {{2, -3.0}, {1, 2.5}};
  return u;
}

InitialCondition gaussian_initial(int n) {
  InitialCondition u;
  u.axes.assign(static_cast<std::size_t>(n), {AxisFactor::kGaussian, 1.0});
  return u;
}

DiffOperator laplacian(int n, double sign) {
  DiffOperator d;
  d.n = n;
  for (int i = 0; i < n; ++i) {
    MultiIndex a(static_cast<std::size_t>(n), 0);
    a[static_cast<std::size_t>(i)] = 2;
    d.add(a, sign);
  }
  return d;
}

}  // namespace

TEST(FourierPolynomial, Examples) {
  const FourierPolynomial lap = fourier_polynomial(laplacian(2, -1.0), 1.0);
  const Complex v = lap({0.3, -1.2});
  EXPECT_NEAR(v.real(), 0.09 + 1.44, 1e-14);
  EXPECT_NEAR(v.imag(), 0.0, 1e-14);

  DiffOperator d;
  d.n = 1;
  d.add({1}, 1.0);
  const FourierPolynomial f = fourier_polynomial(d, 1.0);
  EXPECT_EQ(f({0.7}), Complex(0, 0.7));
  EXPECT_EQ(f.real_part()({0.7}), 0.0);
}

TEST(FourierPolynomial, WorkedExample) {
  const FourierPolynomial bare = fourier_polynomial(a2_operator(), 1.0);
  const FourierPolynomial printed = fourier_polynomial(a2_operator());
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), c = rng.uniform(-2, 2);
    const Complex expect(-2 * a * a - 0.5 * b * b + c * c * c * c + 7 * a * b, 1.5 * b * c * c);
    EXPECT_LT(std::abs(bare({a, b, c}) - expect), 1e-12);
    const double pi = std::numbers::pi;
    const Complex as_printed(-4 * pi * a * a - pi * b * b + 2 * pi * c * c * c * c + 14 * pi * a * b, 3 * pi * b * c * c);
    EXPECT_LT(std::abs(printed({a, b, c}) - as_printed), 1e-11);
  }
}

TEST(DiffOperator, Validation) {
  DiffOperator d;
  d.n = 2;
  EXPECT_THROW(d.validate(), Error);
  d.add({5, 4}, 1.0);
  EXPECT_THROW(d.validate(), Error);
  DiffOperator ok = laplacian(2, 1.0);
  EXPECT_NO_THROW(ok.validate());
}

TEST(Support, WorkedExample) {
  const SupportSet s = support_of(a2_initial());
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].kind, AxisSupport::Kind::kInterval);
  EXPECT_DOUBLE_EQ(s[0].lo, -1 / kTwoPi);
  EXPECT_DOUBLE_EQ(s[0].hi, 1 / kTwoPi);
  EXPECT_EQ(s[1], AxisSupport::point(2.5 / kTwoPi));
  EXPECT_EQ(s[2], AxisSupport::full());
}

TEST(Support, GaussianAndDirac) {
  for (const AxisSupport& a : support_of(gaussian_initial(3))) EXPECT_EQ(a, AxisSupport::full());
  InitialCondition d;
  d.axes = {{AxisFactor::kDirac, 3.0}};
  d.modulations = {{0, 5.0}};
  EXPECT_EQ(support_of(d)[0], AxisSupport::full());
}

TEST(Support, ShiftedSincMatchesFft) {
  InitialCondition u;
  u.axes = {{AxisFactor::kSinc, 2.0}};
  u.modulations = {{0, 4.0}};
  const AxisSupport s = support_of(u)[0];
  ASSERT_EQ(s.kind, AxisSupport::Kind::kInterval);
  EXPECT_NEAR(s.lo, 2 / kTwoPi, 1e-15);
  EXPECT_NEAR(s.hi, 6 / kTwoPi, 1e-15);

  const auto span = oracle::fft_support(
      [](double x) {
        const Complex mod = std::exp(Complex(0, 4 * x));
        return x == 0 ? mod : mod * std::sin(2 * x) / (2 * x);
      },
      2000.0, std::size_t{1} << 18, 0.05);
  EXPECT_NEAR(span.lo, s.lo, 0.01);
  EXPECT_NEAR(span.hi, s.hi, 0.01);
}

TEST(Support, NegativeScaleUsesMagnitude) {
  InitialCondition u;
  u.axes = {{AxisFactor::kSinc, -3.0}};
  const AxisSupport s = support_of(u)[0];
  EXPECT_NEAR(s.lo, -3 / kTwoPi, 1e-15);
  EXPECT_NEAR(s.hi, 3 / kTwoPi, 1e-15);
}

TEST(Minimize, Examples) {
  RealPoly sq{1, {{1.0, {2}}}};
  EXPECT_NEAR(minimize_real(sq, {AxisSupport::full()}).value, 0.0, 1e-12);

  RealPoly unbounded{2, {{-1.0, {4, 0}}, {1.0, {0, 2}}}};
  EXPECT_EQ(minimize_real(unbounded, {AxisSupport::full(), AxisSupport::full()}).value,
            -std::numeric_limits<double>::infinity());

  // Odd leading term on a half-bounded direction is still unbounded on a line.
  RealPoly cubic{1, {{1.0, {3}}}};
  EXPECT_EQ(minimize_real(cubic, {AxisSupport::full()}).value, -std::numeric_limits<double>::infinity());
  EXPECT_NEAR(minimize_real(cubic, {AxisSupport::interval(-2, 1)}).value, -8.0, 1e-9);
  EXPECT_NEAR(minimize_real(cubic, {AxisSupport::point(0.5)}).value, 0.125, 1e-15);
}

TEST(Minimize, WorkedExample) {
  const SupportSet s = support_of(a2_initial());
  const double c = 2.5 / kTwoPi, x0 = -1 / kTwoPi;
  const double by_hand = -2 * x0 * x0 + 7 * x0 * c - 0.5 * c * c;
  EXPECT_NEAR(min_real_on_support(fourier_polynomial(a2_operator(), 1.0), s), by_hand, 1e-9);
  const double scaled = min_real_on_support(fourier_polynomial(a2_operator()), s);
  EXPECT_NEAR(scaled, kTwoPi * by_hand, 1e-8);
  EXPECT_NEAR(scaled, -3.597, 0.01);
}

TEST(Minimize, GridAgreesWithDenseScan) {
  // Random bounded quadratics on boxes: compare against a fine brute-force grid.
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    RealPoly p{2, {}};
    p.terms.push_back({rng.uniform(0.5, 3), {2, 0}});
    p.terms.push_back({rng.uniform(0.5, 3), {0, 2}});
    p.terms.push_back({rng.uniform(-1, 1), {1, 1}});
    p.terms.push_back({rng.uniform(-5, 5), {1, 0}});
    p.terms.push_back({rng.uniform(-5, 5), {0, 1}});
    const SupportSet box = {AxisSupport::interval(-1, 1), AxisSupport::interval(-0.5, 2)};
    double best = 1e300;
    for (int i = 0; i <= 400; ++i) {
      for (int j = 0; j <= 400; ++j) best = std::min(best, p({-1 + 2.0 * i / 400, -0.5 + 2.5 * j / 400}));
    }
    const MinimizeResult r = minimize_real(p, box);
    EXPECT_LE(r.value, best + 1e-12);
    EXPECT_GT(r.value, best - 1e-3);
  }
}

TEST(Classify, Verdicts) {
  const PDEVerdict a2 = classify_pde(a2_operator(), a2_initial());
  EXPECT_TRUE(a2.exists);
  EXPECT_FALSE(a2.vanishes);
  EXPECT_NEAR(a2.min_real, -3.597, 0.01);

  DiffOperator heat = laplacian(2, -1.0);
  heat.add({0, 0}, 1.0);
  const PDEVerdict h = classify_pde(heat, gaussian_initial(2));
  EXPECT_TRUE(h.exists);
  EXPECT_TRUE(h.vanishes);

  const PDEVerdict back = classify_pde(laplacian(2, 1.0), gaussian_initial(2));
  EXPECT_FALSE(back.exists);
  EXPECT_FALSE(back.vanishes);

  const PDEVerdict flat = classify_pde(laplacian(2, -1.0), gaussian_initial(2));
  EXPECT_TRUE(flat.marginal);
}

TEST(Classify, ScaleNeverChangesTheVerdict) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const PdeProblem p = sample_pde(static_cast<int>(rng.uniform_int(1, 3)), rng);
    const PDEVerdict a = classify_pde(p.op, p.u0, 1.0), b = classify_pde(p.op, p.u0);
    if (a.ambiguous || b.ambiguous || a.marginal || b.marginal) continue;
    EXPECT_EQ(a.exists, b.exists);
    EXPECT_EQ(a.vanishes, b.vanishes);
  }
}

TEST(SamplePde, ShapeAndDeterminism) {
  for (int n = 1; n <= 6; ++n) {
    Rng a(n), b(n);
    const PdeProblem p = sample_pde(n, a), q = sample_pde(n, b);
    EXPECT_EQ(p.op.n, n);
    EXPECT_EQ(p.u0.axes.size(), static_cast<std::size_t>(n));
    EXPECT_NO_THROW(p.op.validate());
    EXPECT_EQ(p.op.coeffs, q.op.coeffs);
    for (const Modulation& m : p.u0.modulations) {
      EXPECT_GE(m.axis, 0);
      EXPECT_LT(m.axis, n);
    }
  }
}
