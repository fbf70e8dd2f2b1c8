#include <cmath>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stabgen/error.hpp"
#include "stabgen/pipeline.hpp"
#include "stabgen/sampler.hpp"
#include "stabgen/tokens.hpp"

using namespace stabgen;

namespace {

const std::vector<Var> kXY = {Var::state(0), Var::state(1)};

void count_leaves(const Expr& e, int& ints, int& total) {
  if (e.is_leaf()) {
    ++total;
    ints += e.kind() == Expr::Kind::kInt;
    return;
  }
  if (e.kind() == Expr::Kind::kUnary) return count_leaves(e.child(), ints, total);
  count_leaves(e.left(), ints, total);
  count_leaves(e.right(), ints, total);
}

std::string shape(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::kUnary: return "U" + shape(e.child());
    case Expr::Kind::kBinary: return "B" + shape(e.left()) + shape(e.right());
    default: return "L";
  }
}

}  // namespace

TEST(Rng, Deterministic) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(9, 3), derive_seed(9, 3));
}

TEST(Rng, UniformIntCoversRangeWithoutBias) {
  Rng r(1);
  std::map<std::int64_t, int> seen;
  for (int i = 0; i < 60000; ++i) ++seen[r.uniform_int(-2, 3)];
  ASSERT_EQ(seen.size(), 6u);
  for (const auto& [v, c] : seen) EXPECT_NEAR(c, 10000, 400) << v;
}

TEST(Rng, NormalMoments) {
  Rng r(2);
  double s = 0, s2 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 0.02);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(TreeSampler, ZeroOperatorsIsALeaf) {
  Rng r(1);
  EXPECT_TRUE(sample_tree(0, kXY, DistributionConfig{}, r).is_leaf());
}

TEST(TreeSampler, ExactOperatorCountAndDeterminism) {
  DistributionConfig cfg;
  for (int n = 0; n < 30; ++n) {
    Rng a(n), b(n);
    const Expr e = sample_tree(n, kXY, cfg, a);
    EXPECT_EQ(e.op_count(), static_cast<std::size_t>(n));
    EXPECT_EQ(e, sample_tree(n, kXY, cfg, b));
  }
}

TEST(TreeSampler, IntegerLeafFraction) {
  DistributionConfig cfg;
  TreeSampler t(cfg);
  Rng r(9);
  int ints = 0, total = 0;
  for (int i = 0; i < 10000; ++i) count_leaves(t.sample(5, kXY, r), ints, total);
  EXPECT_NEAR(static_cast<double>(ints) / total, 0.30, 0.02);
}

TEST(TreeSampler, IntegerLeavesAreNonZeroAndInRange) {
  DistributionConfig cfg;
  cfg.p_int = 1.0;
  TreeSampler t(cfg);
  Rng r(3);
  for (int i = 0; i < 2000; ++i) {
    const Expr e = t.sample(0, kXY, r);
    ASSERT_EQ(e.kind(), Expr::Kind::kInt);
    EXPECT_NE(e.int_value(), 0);
    EXPECT_LE(std::abs(e.int_value()), 10);
  }
}

TEST(TreeSampler, ShapesAreUniform) {
  // With one unary and one binary operator and a single leaf, every distinct
  // prefix string is a distinct shape.
  const int n = 4;
  const auto all = oracle::enumerate_expressions(n, 1, 1, 1);
  DistributionConfig cfg;
  TreeSampler t(cfg);
  EXPECT_DOUBLE_EQ(t.shapes(1, n), static_cast<double>(all.size()));

  Rng r(17);
  std::map<std::string, int> freq;
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) ++freq[shape(t.sample(n, kXY, r))];
  EXPECT_EQ(freq.size(), all.size());
  const double expect = static_cast<double>(draws) / static_cast<double>(all.size());
  double chi2 = 0;
  for (const auto& [s, c] : freq) chi2 += (c - expect) * (c - expect) / expect;
  const boost::math::chi_squared dist(static_cast<double>(all.size() - 1));
  EXPECT_LT(chi2, boost::math::quantile(dist, 0.999));
}

TEST(TreeSampler, OperatorWeightsRespected) {
  DistributionConfig cfg = variant_config("sqrt-only", DistributionConfig{});
  TreeSampler t(cfg);
  Rng r(5);
  for (int i = 0; i < 500; ++i) {
    for (Token tok : to_prefix(t.sample(8, kXY, r))) {
      EXPECT_TRUE(tok < Token::kExp || tok > Token::kAtan || tok == Token::kSqrt) << token_name(tok);
    }
  }
}

TEST(SampleSystem, ShapeAndOperatorRange) {
  DistributionConfig cfg;
  Rng r(8);
  const DiffSystem two = sample_system(2, 0, cfg, r);
  EXPECT_EQ(two.n_states(), 2);
  EXPECT_EQ(two.n_controls, 0);
  for (int i = 0; i < 500; ++i) {
    const DiffSystem s = sample_system(3, 1, cfg, r);
    ASSERT_EQ(s.equations.size(), 3u);
    for (const Expr& e : s.equations) {
      EXPECT_GE(e.op_count(), 3u);
      EXPECT_LE(e.op_count(), 11u);
      EXPECT_FALSE(e.depends_on(Var::state(3)));
      EXPECT_FALSE(e.depends_on(Var::control(1)));
      EXPECT_FALSE(e.depends_on(Var::time()));
    }
  }
}

TEST(Degenerate, MissingVariables) {
  const Expr x0 = Expr::variable(Var::state(0)), x1 = Expr::variable(Var::state(1));
  DiffSystem s;
  s.equations = {sin(x0), x0 * Expr::integer(2)};
  s.x_e = {0.1, 0.1};
  EXPECT_TRUE(is_degenerate(s));
  s.equations[1] = x1 + x0;
  EXPECT_FALSE(is_degenerate(s));
  s.n_controls = 1;
  s.u_e = {0.5};
  EXPECT_TRUE(is_degenerate(s));
}

TEST(Equilibrium, ShiftsToZero) {
  const Expr x0 = Expr::variable(Var::state(0));
  DiffSystem s;
  s.equations = {sin(x0)};
  s.x_e = {0.01};
  const DiffSystem e = make_equilibrium(s, false);
  EXPECT_NEAR(std::abs(eval_complex(e.equations[0], e.point())), 0.0, 1e-15);
  // sin(x0) - sin(0.01)
  Assignment a;
  a.set(Var::state(0), 0.3);
  EXPECT_NEAR(eval_complex(e.equations[0], a).real(), std::sin(0.3) - std::sin(0.01), 1e-15);

  s.equations = {Expr::integer(0) - cos(Expr::integer(9) * x0)};
  const DiffSystem c = make_equilibrium(s, false);
  a.set(Var::state(0), 0.2);
  EXPECT_NEAR(eval_complex(c.equations[0], a).real(), -std::cos(1.8) + std::cos(0.09), 1e-15);
}

TEST(Equilibrium, SingularAndComplex) {
  const Expr x0 = Expr::variable(Var::state(0));
  DiffSystem s;
  s.equations = {Expr::integer(1) / x0};
  s.x_e = {0.0};
  try {
    make_equilibrium(s, false);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEvalSingular);
  }
  s.equations = {log(x0 - Expr::integer(2))};
  s.x_e = {0.5};
  EXPECT_THROW(make_equilibrium(s, false), Error);
  const DiffSystem c = make_equilibrium(s, true);
  EXPECT_NEAR(std::abs(eval_complex(c.equations[0], c.point())), 0.0, 1e-15);
}

TEST(Equilibrium, TimeDependentResidualHoldsForAllTimes) {
  const Expr x0 = Expr::variable(Var::state(0)), t = Expr::variable(Var::time());
  const Expr u = Expr::variable(Var::control(0));
  DiffSystem s;
  s.equations = {x0 * t + sin(u * t)};
  s.n_controls = 1;
  s.has_time = true;
  s.x_e = {0.5};
  s.u_e = {0.5};
  s.t_e = 0.5;
  const DiffSystem e = make_equilibrium(s, false);
  for (double tv : {0.0, 0.5, 1.7}) {
    Assignment a = e.point();
    a.set(Var::time(), tv);
    EXPECT_NEAR(std::abs(eval_complex(e.equations[0], a)), 0.0, 1e-12) << tv;
  }
}

TEST(ProblemSpace, SmallValues) {
  EXPECT_EQ(problem_space_size(0, 20, 9, 4), 20);
  EXPECT_EQ(problem_space_size(1, 20, 9, 4), 1780);
}

TEST(ProblemSpace, MatchesBruteForceEnumeration) {
  for (int L = 1; L <= 3; ++L) {
    for (int q1 = 0; q1 <= 2; ++q1) {
      for (int q2 = 0; q2 <= 2; ++q2) {
        for (int m = 0; m <= 3; ++m) {
          const auto n = oracle::enumerate_expressions(m, L, q1, q2).size();
          EXPECT_EQ(problem_space_size(m, L, q1, q2), n) << "m=" << m << " L=" << L << " q1=" << q1 << " q2=" << q2;
        }
      }
    }
  }
}

TEST(ProblemSpace, SequenceAndLog) {
  const auto seq = problem_space_sequence(5, 3, 2, 1);
  ASSERT_EQ(seq.size(), 6u);
  for (int m = 0; m <= 5; ++m) EXPECT_EQ(seq[static_cast<std::size_t>(m)], problem_space_size(m, 3, 2, 1));
  EXPECT_NEAR(log10_big(BigInt(1000)), 3.0, 1e-12);
  BigInt big = 1;
  for (int i = 0; i < 300; ++i) big *= 10;
  EXPECT_NEAR(log10_big(big * 3), 300 + std::log10(3.0), 1e-9);
}
