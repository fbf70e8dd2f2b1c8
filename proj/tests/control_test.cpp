#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stabgen/control.hpp"
#include "stabgen/error.hpp"
#include "stabgen/pipeline.hpp"

using namespace stabgen;

namespace {

Expr X(int i) { return Expr::variable(Var::state(i)); }
Expr U(int i) { return Expr::variable(Var::control(i)); }
Expr I(std::int64_t v) { return Expr::integer(v); }

constexpr std::string_view kA1 =
    "add add sin mul x0 x0 log add INT+ 1 x1 div atan mul u0 x0 add INT+ 1 x1 | sub x1 exp mul x0 x1 "
    "XE FLOAT+ 5 E INT- 1 FLOAT+ 5 E INT- 1 UE FLOAT+ 1 E INT+ 0";

DiffSystem a1_system() { return decode_system_input(parse_tokens(kA1), 0.5, false, 0.0); }

void expect_near(const CMatrix& m, std::initializer_list<double> v, double tol) {
  std::size_t k = 0;
  for (double x : v) {
    EXPECT_NEAR(m(k / m.cols(), k % m.cols()).real(), x, tol) << k;
    ++k;
  }
}

// Pair with a controllable subspace of dimension `r` < n, hidden by a random
// orthogonal change of basis.
std::pair<CMatrix, CMatrix> uncontrollable_pair(std::size_t n, std::size_t p, std::size_t r, Rng& rng) {
  CMatrix a = oracle::gaussian(n, n, rng), b = oracle::gaussian(n, p, rng);
  for (std::size_t i = r; i < n; ++i) {
    for (std::size_t j = 0; j < r; ++j) a(i, j) = 0;
    for (std::size_t j = 0; j < p; ++j) b(i, j) = 0;
  }
  const CMatrix q = oracle::orthogonal(n, rng);
  return {q * a * q.transpose(), q * b};
}

}  // namespace

TEST(Control, GoldenLinearization) {
  const DiffSystem s = a1_system();
  ASSERT_EQ(s.n_controls, 1);
  EXPECT_EQ(s.u_e, std::vector<double>{1.0});
  const Linearization lin = linearize(s);
  expect_near(lin.A, {1.50, 0.46, -0.64, 0.36}, 0.005);
  expect_near(lin.B, {0.27, 0}, 0.005);
  expect_near(kalman_matrix(lin.A, lin.B), {0.27, 0.40, 0, -0.17}, 0.005);
  EXPECT_EQ(rank(kalman_matrix(lin.A, lin.B)), 2);
  const ControlVerdict v = controllability(lin);
  EXPECT_TRUE(v.controllable);
  EXPECT_EQ(v.uncontrollable_dim, 0);
}

TEST(Control, GoldenFeedback) {
  const Linearization lin = linearize(a1_system());
  EXPECT_TRUE(verify_feedback(lin, CMatrix(1, 2, {-22.8, 44.0})));
  // trace and determinant signs decide a 2 x 2 spectrum
  const CMatrix closed = lin.A + lin.B * CMatrix(1, 2, {-22.8, 44.0});
  const Complex det = closed(0, 0) * closed(1, 1) - closed(0, 1) * closed(1, 0);
  EXPECT_LT(closed.trace().real(), 0);
  EXPECT_GT(det.real(), 0);

  const Feedback fb = feedback_matrix(lin, 1.0);
  EXPECT_TRUE(verify_feedback(lin, fb.K));
  EXPECT_NEAR(fb.K(0, 0).real(), -22.8, 0.2);
  EXPECT_NEAR(fb.K(0, 1).real(), 44.0, 0.2);
}

TEST(Control, LinearizeExamples) {
  DiffSystem s;
  s.equations = {U(0), X(0) + X(1) * I(0)};
  s.n_controls = 1;
  s.x_e = {0.5, 0.5};
  s.u_e = {0.5};
  const Linearization lin = linearize(s);
  expect_near(lin.A, {0, 0, 1, 0}, 0);
  expect_near(lin.B, {1, 0}, 0);

  s.equations = {asin(I(2) + X(0)) + U(0), X(1)};
  try {
    linearize(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kComplexValue);
  }
}

TEST(Kalman, Examples) {
  const CMatrix k = kalman_matrix(CMatrix(2, 2, {0, 1, 0, 0}), CMatrix(2, 1, {0, 1}));
  expect_near(k, {0, 1, 1, 0}, 0);
  const CMatrix z = kalman_matrix(CMatrix(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9}), CMatrix::zero(3, 2));
  EXPECT_EQ(z.cols(), 6u);
  EXPECT_EQ(z.max_abs(), 0.0);
  EXPECT_EQ(rank(z), 0);
}

TEST(Controllability, ZeroInputAndBlockDiagonal) {
  Rng rng(1);
  const CMatrix a = oracle::gaussian(4, 4, rng);
  EXPECT_EQ(controllability(linearization_of(a, CMatrix::zero(4, 1))).uncontrollable_dim, 4);

  CMatrix blk = CMatrix::zero(5, 5);
  blk.set_block(0, 0, oracle::gaussian(2, 2, rng));
  blk.set_block(2, 2, oracle::gaussian(3, 3, rng));
  CMatrix b = CMatrix::zero(5, 1);
  b.set_block(0, 0, oracle::gaussian(2, 1, rng));
  const ControlVerdict v = controllability(linearization_of(blk, b));
  EXPECT_EQ(v.uncontrollable_dim, 3);
  EXPECT_FALSE(v.controllable);
}

TEST(Controllability, StaircaseMatchesKalmanRank) {
  Rng rng(2);
  for (int trial = 0; trial < 400; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 7));
    const auto p = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const auto r = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n)));
    const auto [a, b] = uncontrollable_pair(n, p, r, rng);
    const int dim = controllable_dimension(a, b);
    EXPECT_EQ(dim, rank(kalman_matrix(a, b)));
    EXPECT_LE(dim, static_cast<int>(r));
    if (r == n) EXPECT_EQ(dim, static_cast<int>(n));
  }
}

TEST(Controllability, InvariantUnderSimilarity) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 6));
    const auto [a, b] = uncontrollable_pair(n, 1, static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(n))), rng);
    // well-conditioned S: identity plus a small perturbation
    const CMatrix s = CMatrix::identity(n) + oracle::gaussian(n, n, rng) * (0.3 / static_cast<double>(n));
    const CMatrix si = LU(s).inverse();
    EXPECT_EQ(controllable_dimension(si * a * s, si * b), controllable_dimension(a, b));
  }
}

TEST(Controllability, BadlyScaledPairs) {
  // Exactly controllable chain whose Kalman columns span twenty orders of magnitude.
  const CMatrix a(3, 3, {0, 0, 0, 1e9, 0, 0, 0, 1e-4, 0});
  const CMatrix b(3, 1, {1, 0, 0});
  EXPECT_EQ(controllable_dimension(a, b), 3);
}

TEST(DegenerateJacobian, RowsAndColumns) {
  EXPECT_TRUE(degenerate_jacobian(CMatrix(2, 2, {1, 0, 0, 0}), CMatrix(2, 1, {1, 0})));
  EXPECT_TRUE(degenerate_jacobian(CMatrix(2, 2, {1, 2, 3, 4}), CMatrix(2, 1, {0, 0})));
  EXPECT_TRUE(degenerate_jacobian(CMatrix(2, 2, {1, 0, 3, 0}), CMatrix(2, 1, {1, 1})));
  EXPECT_FALSE(degenerate_jacobian(CMatrix(2, 2, {1, 0, 0, 1}), CMatrix(2, 1, {1, 0})));
  EXPECT_FALSE(degenerate_jacobian(CMatrix(1, 1, {-1}), CMatrix{}));
}

TEST(Nonauto, Examples) {
  DiffSystem s;
  s.n_controls = 1;
  s.has_time = true;
  s.x_e = {0.5};
  s.u_e = {0.5};
  s.equations = {U(0)};
  EXPECT_TRUE(nonauto_controllability(s, 0.5));

  // D0 = t vanishes at t_e = 0 but D1 = 1 does not.
  s.equations = {Expr::variable(Var::time()) * U(0)};
  EXPECT_TRUE(nonauto_controllability(s, 0.0));
  const auto d = nonauto_iterates(s);
  ASSERT_EQ(d.size(), 2u);
  Assignment t0;
  t0.set(Var::time(), 0.0);
  EXPECT_EQ(eval_complex(d[0][0][0], t0), Complex(0, 0));
  EXPECT_EQ(eval_complex(d[1][0][0], t0), Complex(1, 0));

  DiffSystem z;
  z.n_controls = 1;
  z.has_time = true;
  z.x_e = {0.5, 0.5};
  z.u_e = {0.5};
  z.equations = {X(1) + U(0) * I(0), I(0) * X(0)};
  EXPECT_FALSE(nonauto_controllability(z, 0.5));
}

TEST(Nonauto, ReducesToKalmanWithoutTime) {
  // For time-invariant systems D_i = (-A)^i B, so the rank matches Kalman.
  DistributionConfig cfg = default_config_for("ctrl-auto");
  TreeSampler trees(cfg);
  Rng rng(4);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 100; ++trial) {
    try {
      DiffSystem s = make_equilibrium(sample_system(2, 1, cfg, trees, rng), false);
      s.has_time = true;
      s.t_e = 0.5;
      const Linearization lin = linearize(s);
      if (cond1(lin.A) > 1e6) continue;
      EXPECT_EQ(nonauto_controllability(s, 0.5), rank(kalman_matrix(lin.A, lin.B)) == 2);
      ++checked;
    } catch (const Error&) {
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(Feedback, ClosedForms) {
  const Feedback f = feedback_matrix(CMatrix(1, 1, {-1}), CMatrix(1, 1, {1}), 1.0);
  EXPECT_NEAR(f.gramian(0, 0).real(), (std::exp(2.0) - 1) / 2, 1e-12);
  EXPECT_NEAR(f.K(0, 0).real(), -0.313035, 1e-6);

  const Feedback g = feedback_matrix(CMatrix::zero(3, 3), CMatrix::identity(3), 1.0);
  EXPECT_LT((g.gramian - CMatrix::identity(3)).max_abs(), 1e-13);
  EXPECT_LT((g.K + CMatrix::identity(3)).max_abs(), 1e-13);

  const Feedback vl = feedback_matrix(CMatrix(1, 1, {-1}), CMatrix(1, 1, {1}), 1.0, true);
  EXPECT_NEAR(vl.K(0, 0).real(), f.K(0, 0).real(), 1e-12);
}

TEST(Feedback, SingularGramianRejected) {
  try {
    feedback_matrix(CMatrix(2, 2, {1, 0, 0, 1}), CMatrix(2, 1, {1, 0}), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGramianSingular);
  }
}

TEST(Feedback, VerifyExamples) {
  EXPECT_FALSE(verify_feedback(CMatrix(1, 1, {1}), CMatrix(1, 1, {1}), CMatrix(1, 1, {0})));
  EXPECT_TRUE(verify_feedback(CMatrix(2, 2, {-1, 0, 0, -1}), CMatrix(2, 1, {1, 0}), CMatrix(1, 2, {0, 0})));
  EXPECT_THROW(verify_feedback(CMatrix(2, 2, {-1, 0, 0, -1}), CMatrix(2, 1, {1, 0}), CMatrix(2, 1, {0, 0})), Error);
}

TEST(Feedback, StabilizesRandomControllablePairs) {
  Rng rng(5);
  int done = 0, singular = 0;
  while (done < 100) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const auto p = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const CMatrix a = oracle::gaussian(n, n, rng), b = oracle::gaussian(n, p, rng);
    if (!controllability(linearization_of(a, b)).controllable) continue;
    try {
      const Feedback fb = feedback_matrix(a, b, 1.0);
      EXPECT_TRUE(verify_feedback(a, b, fb.K)) << to_string(a) << to_string(b);
      ++done;
    } catch (const Error& e) {
      // numerically controllable but the Gramian is too ill-conditioned to invert
      EXPECT_EQ(e.kind(), ErrorKind::kGramianSingular);
      ++singular;
    }
  }
  EXPECT_LT(singular, 10);
}

TEST(Gramian, PositiveDefiniteIffControllable) {
  Rng rng(6);
  for (int trial = 0; trial < 400; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const auto p = static_cast<std::size_t>(rng.uniform_int(1, 2));
    const auto r = trial % 2 ? n : static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
    const auto [a, b] = uncontrollable_pair(n, p, r, rng);
    const CMatrix f = gramian_factor(a, b, 1.0);
    const bool pd = rank(f) == static_cast<int>(n);
    EXPECT_EQ(pd, rank(kalman_matrix(a, b)) == static_cast<int>(n)) << "n=" << n << " r=" << r;
    if (r < n) EXPECT_LE(rank(f), static_cast<int>(r));
  }
}
